#pragma once

#include <optional>
#include <string>
#include <vector>

#include "colplan/allocator.hpp"
#include "colplan/exact.hpp"
#include "colplan/mission.hpp"
#include "colplan/protocol.hpp"
#include "colplan/scenario.hpp"
#include "colplan/schedule.hpp"

namespace colplan {

struct AssignmentRow {
  std::size_t id = 0;  // 1-based, in enumeration order
  bool filtered = false;
  bool feasible = false;
  std::string note;
  std::optional<Duration> tInit;
  std::optional<Duration> tAdjusted;
  std::optional<Duration> individual;  // T^indiv after adjustment
  std::optional<Duration> J;
  std::size_t cycles = 0;
  std::size_t adjustments = 0;
  std::size_t messages = 0;
  bool boundReached = false;
  std::size_t productStates = 0;  // Σ |Q_P| over robots
  std::size_t delta = 0;          // largest pruned level
  std::size_t prunedEdges = 0;    // Σ |E| of the pruned automatons
  double prune_s = 0;             // per-robot average
  double adj_s = 0;
  double ip_s = 0;
  std::vector<Duration> series;   // T^colla after each accepted adjustment
};

/// Everything needed to replay and report the incumbent.
struct Solution {
  std::size_t row = 0;  // index into RunReport::rows
  Assignment assignment;
  std::vector<RobotPlan> plans;
  CostReport cost;
  std::vector<std::string> protocolTrace;
  SimResult execution;
};

struct RunReport {
  Mission mission;
  std::size_t nfaStates = 0;
  std::size_t prunedNfaStates = 0;
  std::vector<AssignmentRow> rows;
  std::optional<Solution> best;
  std::string stopReason;  // unsat | cap | budget
  double seconds = 0;

  bool budgetExhausted() const { return stopReason == "budget"; }
};

struct FrameworkOptions {
  std::optional<std::string> emitLpDir;  // one LP file per evaluated assignment
};

/// Plans for one assignment: local formulas, products, pruned automatons and
/// initial runs. Throws NoAcceptingPath / LevelDisconnected when some robot
/// cannot serve its tasks.
std::vector<RobotPlan> synthesize(const Instance& in, const Mission& mission, const Assignment& a,
                                  std::vector<double>* pruneSeconds = nullptr);

/// The collaborative mission derived from the global formula. Throws
/// InfeasibleMission when the fleet cannot satisfy it.
Mission deriveMission(const Instance& in, const ScenarioOptions& options, std::size_t* nfaStates = nullptr,
                      std::size_t* prunedStates = nullptr);

/// Executes the plans with the online collaborative check.
SimResult execute(const Instance& in, const std::vector<RobotPlan>& plans, const Mission& mission,
                  const Assignment& a);

/// Enumerate assignments, filter, synthesize, adjust, optionally solve
/// exactly; keeps the assignment of least adjusted T^colla.
RunReport runFramework(const Instance& in, const ScenarioOptions& options, const FrameworkOptions& fw = {});
RunReport runFramework(const Scenario& sc);

/// metrics.csv, schedule.json, protocol_trace.txt, tcolla_series.csv and
/// execution_trace.txt under `dir`. Throws Io.
void writeReport(const RunReport& rr, const Instance& in, const std::string& dir);

std::string metricsCsv(const RunReport& rr);
std::string scheduleJson(const RunReport& rr, const Instance& in);
std::string seriesCsv(const RunReport& rr);

/// Wall-time columns end in `_s`.
extern const std::vector<std::string> kMetricsColumns;

}  // namespace colplan
