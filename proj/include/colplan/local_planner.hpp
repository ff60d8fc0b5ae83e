#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "colplan/formula.hpp"
#include "colplan/nfa.hpp"
#include "colplan/world.hpp"

namespace colplan {

/// φ_r ∧ nested ◇-chains over the ordered tasks; `subsequence[i]` is the k of
/// `ordered[i]`. A chain per subsequence, each hooked to the previous chain's
/// last task.
Formula buildLocalFormula(const Formula& phi, const std::vector<PropId>& ordered,
                          const std::vector<std::size_t>& subsequence);

struct ProductEdge {
  std::size_t to;
  Duration weight;
  std::uint32_t witness;  // index into ProductPa::witnesses()
};

/// Product of a robot's transition system with the NFA of its local formula.
/// Moving into region q' reads L(q'); the robot performs the minimal positive
/// witness of the crossed guard that its label offers. The start region is
/// read by a virtual step out of the NFA's initial states.
class ProductPa {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  std::size_t size() const { return region_.size(); }
  RegionId region(std::size_t s) const { return region_[s]; }
  std::size_t nfaState(std::size_t s) const { return nfa_[s]; }
  bool accepting(std::size_t s) const { return accepting_[s]; }
  const std::vector<std::size_t>& initial() const { return initial_; }
  /// Witness performed when entering initial state `s` (npos if not initial).
  std::uint32_t initialWitness(std::size_t s) const { return initialWitness_[s]; }
  const std::vector<ProductEdge>& out(std::size_t s) const { return out_[s]; }
  const PropSet& witness(std::uint32_t id) const { return witnesses_[id]; }
  std::size_t edgeCount() const;
  std::size_t find(RegionId q, std::size_t nfaState) const;
  /// Weight and witness of the edge s -> t, if any.
  const ProductEdge* edge(std::size_t s, std::size_t t) const;

  /// C(ct): states entered by a crossing (NFA component changes) whose
  /// performed witness contains ct. Sorted.
  const std::vector<std::size_t>& collab(PropId ct) const;
  bool isCollab(std::size_t s, PropId ct) const;

  friend ProductPa buildProduct(const Wts& w, const Nfa& a);

 private:
  std::vector<RegionId> region_;
  std::vector<std::size_t> nfa_;
  std::vector<bool> accepting_;
  std::vector<std::size_t> initial_;
  std::vector<std::uint32_t> initialWitness_;
  std::vector<std::vector<ProductEdge>> out_;
  std::vector<PropSet> witnesses_;
  std::map<PropId, std::vector<std::size_t>> collab_;
  std::size_t nfaSize_ = 0;
  std::vector<std::size_t> index_;  // region * nfaSize + nfaState -> state
};

/// Throws NoAcceptingPath when no accepting state is reachable.
ProductPa buildProduct(const Wts& w, const Nfa& a);

struct Strategy {
  std::vector<std::size_t> run;            // product states
  std::vector<RegionId> walk;              // projection onto the world
  std::vector<PropSet> performed;          // label performed at each run position
  std::vector<std::size_t> collabIndices;  // j^ct per task, in task order
  Duration weight = 0;
};

/// Derives walk, performed labels, task positions and weight of a product run.
/// Throws NoAcceptingPath when a task in `tasks` is not performed in order.
Strategy makeStrategy(const ProductPa& p, std::vector<std::size_t> run, const std::vector<PropId>& tasks);

/// Minimum-weight accepting run; ties broken by (distance, state index).
Strategy initialRun(const ProductPa& p, const std::vector<PropId>& tasks);

/// Shortest distances from `sources` (all at distance 0) plus predecessor links.
struct ShortestPaths {
  std::vector<Duration> dist;
  std::vector<std::size_t> parent;

  std::vector<std::size_t> pathTo(std::size_t target) const;
};
ShortestPaths dijkstra(const ProductPa& p, const std::vector<std::size_t>& sources);

/// Shortest paths that perform `ct` exactly once, on the final edge into the
/// target: `arrival[t]` is finite only for states entered by such an edge.
/// If a source itself was entered performing ct (initial witness), it counts
/// as arrival at distance 0 when `sourcesPerform` is set.
struct TaskPaths {
  std::vector<Duration> arrival;
  std::vector<std::size_t> arrivalParent;  // state before the final edge (npos when the source itself)
  ShortestPaths interior;

  std::vector<std::size_t> pathTo(std::size_t target) const;
};
TaskPaths taskDijkstra(const ProductPa& p, std::size_t source, PropId ct, bool sourcePerforms);

struct PrunedEdge {
  std::size_t from;  // index within level i
  std::size_t to;    // index within level i + 1
  Duration weight;
  std::vector<std::size_t> path;  // product states, both endpoints included
};

/// Hierarchical pruned product: level 0 initial states, level i the states of
/// C(ct_i), last level accepting states. Edges only join consecutive levels.
class PrunedPa {
 public:
  std::vector<PropId> tasks;
  std::vector<std::vector<std::size_t>> levels;   // product state ids
  std::vector<std::vector<PrunedEdge>> edges;     // edges[i]: level i -> i + 1

  std::size_t levelCount() const { return levels.size(); }
  std::size_t stateCount() const;
  std::size_t edgeCount() const;
  const PrunedEdge* edge(std::size_t level, std::size_t from, std::size_t to) const;
  std::optional<std::size_t> indexIn(std::size_t level, std::size_t productState) const;
  /// Sum of all edge weights (the big-M bound of the exact model).
  Duration totalWeight() const;

  friend PrunedPa prunePa(const ProductPa& p, const std::vector<PropId>& tasks);

 private:
  std::vector<std::map<std::pair<std::size_t, std::size_t>, std::size_t>> lookup_;
};

/// Throws LevelDisconnected when some level cannot be reached.
PrunedPa prunePa(const ProductPa& p, const std::vector<PropId>& tasks);

/// One state per level; `choice[i]` indexes `levels[i]`.
struct PrunedPath {
  std::vector<std::size_t> choice;
  Duration weight = std::numeric_limits<Duration>::infinity();
};

/// Cheapest completion from (level, state) to the last level, per state.
std::vector<std::vector<Duration>> costToGo(const PrunedPa& lp);
/// Cheapest prefix from level 0 to (level, state), per state.
std::vector<std::vector<Duration>> costToCome(const PrunedPa& lp);

/// Cheapest accepting path through the hierarchy.
PrunedPath shortestPrunedPath(const PrunedPa& lp);
/// Cheapest path that uses `fixed[i]` for every level where it is set.
PrunedPath constrainedPrunedPath(const PrunedPa& lp, const std::vector<std::optional<std::size_t>>& fixed);
/// Cheapest continuation from (level, state) to the last level.
PrunedPath bestSuffix(const PrunedPa& lp, std::size_t level, std::size_t state);

/// Product run obtained by concatenating edge witnesses along `choice`.
std::vector<std::size_t> expandPath(const PrunedPa& lp, const std::vector<std::size_t>& choice);

/// Level choice matching a strategy (initial state, task positions, final state).
std::vector<std::size_t> choiceOf(const PrunedPa& lp, const Strategy& s);

/// Shortest run from `anchor` through `via` (performing ct there) and on to
/// an accepting state, computed on the product.
struct ForcedPath {
  std::vector<std::size_t> path;  // anchor ... via ... accepting
  Duration toVia = 0;
  Duration weight = 0;
};
ForcedPath pathThrough(const ProductPa& p, std::size_t anchor, std::size_t via, PropId ct, bool anchorPerforms);

}  // namespace colplan
