#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "colplan/ids.hpp"
#include "colplan/nfa.hpp"
#include "colplan/world.hpp"

namespace colplan {

/// One collaborative task occurrence ct^k_l. Indices are 1-based.
struct Occurrence {
  PropId task;
  std::size_t k = 0;
  std::size_t m = 0;
  std::size_t l = 0;
  std::size_t element = 0;  // index into Mission::elements
};

/// σ^k(m): tasks that must be executed synchronously.
struct Element {
  std::size_t k = 0;
  std::size_t m = 0;
  PropSet tasks;
  PropSet negative;                     // propositions the guard forbids at this step
  std::vector<std::size_t> occurrences; // indices into Mission::occurrences
};

struct Mission {
  std::vector<std::size_t> run;          // accepting run in the pruned NFA
  std::vector<std::size_t> cuts;         // decomposition positions on `run`, endpoints included
  std::vector<Element> elements;         // sorted by (k, m)
  std::vector<Occurrence> occurrences;   // T̃^sort: sorted by (k, l)
  std::size_t subsequenceCount = 0;

  /// Previous element of the same subsequence.
  std::optional<std::size_t> previousElement(std::size_t e) const;
  /// Flattened essential sequence (one label per element, in (k, m) order).
  LabelSequence labels() const;
  /// Element label sets of subsequence k (1-based).
  LabelSequence subsequence(std::size_t k) const;
  std::optional<std::size_t> occurrenceOf(PropId task) const;
};

/// Removes guard cubes whose simultaneous tasks the fleet cannot staff (each
/// robot joins at most one task per step), then trims. Throws EmptyLanguage.
Nfa pruneNfa(const Nfa& a, const Fleet& fleet, const std::vector<TaskReq>& tasks);

/// Whether the fleet can staff all tasks of `tasks` at once.
bool staffable(const PropSet& simultaneous, const Fleet& fleet, const std::vector<TaskReq>& tasks);

/// Fewest-transition accepting run, lexicographically smallest among those.
/// Throws EmptyLanguage.
std::vector<std::size_t> shortestAcceptingRun(const Nfa& a);

struct DecompositionOptions {
  std::size_t maxSegment = 6;           // elements per subsequence considered for a cut
  std::size_t maxInterleavings = 200000;
};

/// Run positions splitting the essential sequence into independent
/// subsequences; endpoints always included.
std::vector<std::size_t> decompositionStates(const Nfa& a, const std::vector<std::size_t>& run,
                                             const DecompositionOptions& options = {});

/// Throws UnsupportedMission when a task occurs twice in the essential sequence.
Mission buildMission(const Nfa& a, const std::vector<std::size_t>& run, const std::vector<std::size_t>& positions);

/// Every order-preserving interleaving of `segments` is accepted (idle steps allowed).
/// Returns nullopt when the interleaving count exceeds `cap`.
std::optional<bool> allInterleavingsAccepted(const Nfa& a, const std::vector<LabelSequence>& segments,
                                             std::size_t cap);

}  // namespace colplan
