#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "colplan/mission.hpp"
#include "colplan/world.hpp"

namespace colplan {

struct Lit {
  std::uint32_t var = 0;
  bool negated = false;

  auto operator<=>(const Lit&) const = default;
};

/// At least `bound` of `lits` hold. Plain clauses use bound 1.
struct AtLeast {
  std::vector<Lit> lits;
  int bound = 1;
};

/// Constraint (3): some robot takes a task in both consecutive elements, i.e.
/// OR over robots of (OR first) AND (OR second).
struct SharedRobot {
  std::vector<std::pair<std::vector<Lit>, std::vector<Lit>>> options;
};

/// Consecutive element pairs (subsequence k, element m and m+1) that get
/// constraint (3). `all` applies it everywhere.
struct CommPairs {
  bool all = true;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  bool contains(std::size_t k, std::size_t m) const;
};

class Assignment {
 public:
  Assignment() = default;
  Assignment(std::size_t robots, std::size_t occurrences, std::vector<bool> values)
      : robots_(robots), occurrences_(occurrences), x_(std::move(values)) {}

  bool get(RobotId r, std::size_t occ) const { return x_.at(r.index() * occurrences_ + occ); }
  std::size_t robotCount() const { return robots_; }
  std::size_t occurrenceCount() const { return occurrences_; }
  const std::vector<bool>& values() const { return x_; }

  /// T̃_r as occurrence indices, sorted by (k, l).
  std::vector<std::size_t> tasksOf(RobotId r) const;
  /// R(ct) for an occurrence.
  std::vector<RobotId> robotsOf(std::size_t occ) const;

  bool operator==(const Assignment&) const = default;

 private:
  std::size_t robots_ = 0;
  std::size_t occurrences_ = 0;
  std::vector<bool> x_;
};

/// Boolean allocation model with cardinality constraints and an internal
/// DPLL search. Variable x_r^(k,l) has index r * occurrences + occ.
class AllocModel {
 public:
  AllocModel(std::size_t robots, std::size_t occurrences) : robots_(robots), occurrences_(occurrences) {}

  std::uint32_t var(RobotId r, std::size_t occ) const {
    return static_cast<std::uint32_t>(r.index() * occurrences_ + occ);
  }
  std::size_t varCount() const { return robots_ * occurrences_; }
  std::size_t robotCount() const { return robots_; }
  std::size_t occurrenceCount() const { return occurrences_; }

  void addAtLeast(std::vector<Lit> lits, int bound);
  void addSharedRobot(SharedRobot c);
  /// f <- f AND NOT X
  void block(const Assignment& a);

  const std::vector<AtLeast>& cardinality() const { return atLeast_; }
  const std::vector<SharedRobot>& shared() const { return shared_; }
  std::size_t blockedCount() const { return blocked_; }

  bool satisfiedBy(const std::vector<bool>& values) const;
  /// First satisfying valuation in branching order (lowest variable first,
  /// false before true).
  std::optional<std::vector<bool>> solve() const;

  /// `p alloc <nvars>` header, then one constraint per line:
  /// `atleast <k> <lits...>` and `shared <a-lits> ; <b-lits> | ...`.
  /// Literals are 1-based, negative when negated.
  void dump(std::ostream& os) const;

 private:
  std::size_t robots_;
  std::size_t occurrences_;
  std::vector<AtLeast> atLeast_;
  std::vector<SharedRobot> shared_;
  std::size_t blocked_ = 0;
};

/// Constraints (1)-(3) for the mission's occurrences. Robots holding none of a
/// task's required capabilities are fixed to false for it.
AllocModel buildModel(const Mission& mission, const Fleet& fleet, const std::vector<TaskReq>& tasks,
                      const CommPairs& commPairs = {});

/// Next satisfying assignment, immediately blocked; nullopt once exhausted.
std::optional<Assignment> nextAssignment(AllocModel& model);

/// True when `candidate` gives every robot a superset of some history entry's tasks.
bool dominanceFilter(const std::vector<Assignment>& history, const Assignment& candidate);

}  // namespace colplan
