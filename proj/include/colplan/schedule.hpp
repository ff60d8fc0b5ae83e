#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "colplan/allocator.hpp"
#include "colplan/formula.hpp"
#include "colplan/local_planner.hpp"
#include "colplan/mission.hpp"
#include "colplan/world.hpp"

namespace colplan {

/// Ideal arrival times of one robot, ignoring waits.
struct Timeline {
  RobotId robot;
  std::vector<std::size_t> occurrences;  // T̃_r, (k, l) order
  std::vector<Duration> arrival;         // t_r(ct), aligned with occurrences
  Duration completion = 0;               // T_r
  std::uint64_t version = 0;

  std::optional<Duration> arrivalAt(std::size_t occurrence) const;
  bool operator==(const Timeline&) const = default;
};

/// Weight of the world edge a-b in `w`; throws Unreachable when absent.
Duration stepWeight(const Wts& w, RegionId a, RegionId b);

/// Prefix sums of the walk up to each task position; completion = walk weight.
Timeline computeTimeline(const Strategy& s, const Wts& w, const std::vector<std::size_t>& occurrences);

struct CostReport {
  std::vector<Duration> elementTime;     // t(σ^k(m)), per element
  std::vector<Duration> occurrenceTime;  // t(ct), per occurrence
  std::vector<Duration> delay;           // delay_r, per robot
  std::vector<Duration> robotTotal;      // T_r^colla, per robot
  Duration total = 0;                    // T^colla
  Duration individual = 0;               // Σ T_r

  bool operator==(const CostReport&) const = default;
};

/// Synchronized execution times, delays and total cost. `timelines` is
/// indexed by robot. Elements are processed in (k, m) order; the tasks of an
/// element share one time, and an element never precedes its predecessor.
CostReport computeTimeCost(const std::vector<Timeline>& timelines, const Mission& mission, const Assignment& a);

struct SimEvent {
  enum class Kind { Move, Task };
  Duration time = 0;
  Kind kind = Kind::Move;
  RobotId robot;
  RegionId from;
  RegionId to;
  PropId task;
  std::vector<RobotId> robots;
};

struct SimResult {
  std::vector<SimEvent> events;       // sorted by time, stable
  CostReport cost;
  std::vector<LabelSequence> localTraces;  // per robot: performed non-collaborative labels
  LabelSequence globalTrace;               // element labels in firing order
  std::vector<std::size_t> firingOrder;    // element indices
};

struct SimOptions {
  PropSet collaborative;         // propositions treated as collaborative tasks
  const Nfa* global = nullptr;   // collaborative NFA checked online when set
};

/// Discrete-event execution of the strategies. `occurrences[r]` lists the
/// occurrence robot r performs at each `collabIndices` entry. Throws
/// DeadlockDetected and NegativeObligationViolated.
SimResult simulate(const std::vector<Strategy>& strategies, const std::vector<std::vector<std::size_t>>& occurrences,
                   const std::vector<Wts>& wts, const Mission& mission, const Assignment& a,
                   const SimOptions& options = {});

/// `<time> <robot> MOVE <from> <to>` / `<time> TASK <ct> ROBOTS <list>` lines.
std::vector<std::string> formatEvents(const std::vector<SimEvent>& events, const World& world, const Fleet& fleet,
                                      const PropTable& props);

std::string formatDuration(Duration d);

/// Everything one robot holds for a fixed assignment.
struct RobotPlan {
  RobotId robot;
  std::vector<std::size_t> occurrences;  // T̃_r
  std::vector<PropId> tasks;             // propositions of T̃_r
  Wts wts;
  ProductPa product;
  PrunedPa pruned;
  Strategy strategy;
  Timeline timeline;
};

std::vector<Timeline> timelinesOf(const std::vector<RobotPlan>& plans);

}  // namespace colplan
