#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "colplan/schedule.hpp"

namespace colplan {

struct LinearTerm {
  std::size_t var;
  double coef;

  bool operator==(const LinearTerm&) const = default;
};

enum class Sense { Le, Ge, Eq };

struct LinearConstraint {
  std::string name;
  std::vector<LinearTerm> terms;  // sorted by variable, no zero coefficients
  Sense sense = Sense::Eq;
  double rhs = 0;

  bool operator==(const LinearConstraint&) const = default;
};

struct Variable {
  std::string name;
  bool binary = false;

  bool operator==(const Variable&) const = default;
};

/// Minimization model with non-negative continuous and binary variables.
class LinearModel {
 public:
  std::size_t addVariable(std::string name, bool binary = false);
  std::optional<std::size_t> find(const std::string& name) const;
  void addConstraint(std::string name, std::vector<LinearTerm> terms, Sense sense, double rhs);
  void setObjective(std::vector<LinearTerm> terms);

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<LinearConstraint>& constraints() const { return rows_; }
  const std::vector<LinearTerm>& objective() const { return objective_; }

  double objectiveValue(const std::vector<double>& values) const;
  /// Name of the first violated constraint, or nullopt.
  std::optional<std::string> violated(const std::vector<double>& values, double tol = 1e-9) const;

  std::vector<std::string> comments;

  bool operator==(const LinearModel& o) const {
    return vars_ == o.vars_ && rows_ == o.rows_ && objective_ == o.objective_;
  }

 private:
  static std::vector<LinearTerm> canonical(std::vector<LinearTerm> terms);

  std::vector<Variable> vars_;
  std::vector<LinearConstraint> rows_;
  std::vector<LinearTerm> objective_;
};

/// Flow, arrival, latest-arrival and delay constraints over the robots'
/// pruned automatons, with the arrival recursion linearized by big-M.
struct MilpModel {
  LinearModel lp;
  std::vector<Duration> bigM;                               // per robot
  std::vector<std::vector<std::vector<std::size_t>>> edge;  // [robot][level][edge] -> y
  std::vector<std::vector<std::size_t>> arrival;            // [robot][task] -> t
  std::vector<std::vector<std::size_t>> delay;              // [robot][task] -> d
  std::vector<std::size_t> end;                             // [robot] -> t_end
  std::vector<std::size_t> latest;                          // [occurrence] -> z
};

MilpModel buildMilp(const std::vector<RobotPlan>& plans, const Mission& mission, const Assignment& a);

/// Variable values induced by one level choice per robot.
std::vector<double> milpValuation(const MilpModel& m, const std::vector<RobotPlan>& plans, const Mission& mission,
                                  const Assignment& a, const std::vector<std::vector<std::size_t>>& choices);

/// One cheapest path per level choice: `legs[i]` is the weight of the edge
/// entering level i + 1.
struct RobotOption {
  std::vector<std::size_t> choice;
  std::vector<Duration> legs;
};

/// All level choices of a robot; with `pareto`, only those whose leg vector
/// is not dominated (later legs can only delay everything downstream).
std::vector<RobotOption> robotOptions(const PrunedPa& lp, bool pareto, std::size_t cap = 10'000'000);

/// Timeline of a level choice without expanding it.
Timeline optionTimeline(const RobotPlan& plan, const RobotOption& option);

struct ExactOptions {
  std::size_t combinationCap = 10'000'000;
  double timeBudgetSeconds = 60;
  bool pareto = true;
};

struct ExactResult {
  Duration J = std::numeric_limits<Duration>::infinity();
  std::vector<std::vector<std::size_t>> choices;  // per robot
  std::vector<Strategy> strategies;
  CostReport cost;
  std::size_t combinations = 0;  // product of per-robot option counts
  std::size_t evaluated = 0;
  double seconds = 0;
};

/// Exact minimum total time cost by branch and bound over level choices.
/// Throws BudgetExceeded when the search space or the time budget is exceeded.
ExactResult solveExact(const std::vector<RobotPlan>& plans, const Mission& mission, const Assignment& a,
                       const ExactOptions& options = {});

/// CPLEX LP text: objective, constraints, bounds, binaries.
void writeLp(const LinearModel& m, std::ostream& os);
void emitLp(const LinearModel& m, const std::string& path);
/// Reads the subset of LP syntax `writeLp` produces. Throws SyntaxError.
LinearModel parseLp(std::istream& is);

/// Same variables, objective and rows, matched by variable name.
bool equivalent(const LinearModel& a, const LinearModel& b);

}  // namespace colplan
