#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "colplan/formula.hpp"
#include "colplan/ids.hpp"

namespace colplan {

/// Conjunction of literals. `pos` and `neg` are disjoint in a normalized guard.
struct Cube {
  PropSet pos;
  PropSet neg;

  bool satisfiedBy(const PropSet& label) const { return label.includes(pos) && !label.intersects(neg); }
  auto operator<=>(const Cube&) const = default;
};

/// Boolean transition condition in minimal DNF: contradictory cubes dropped,
/// complementary pairs merged, subsumed cubes removed. An empty cube list is
/// unsatisfiable; a single empty cube is `true`.
class Guard {
 public:
  Guard() = default;
  static Guard fromCubes(std::vector<Cube> cubes);
  static Guard top() { return fromCubes({Cube{}}); }

  const std::vector<Cube>& cubes() const { return cubes_; }
  bool unsatisfiable() const { return cubes_.empty(); }
  bool isTrue() const { return cubes_.size() == 1 && cubes_[0].pos.empty() && cubes_[0].neg.empty(); }
  bool satisfiedBy(const PropSet& label) const;
  /// The empty label set satisfies the guard (some cube has no positive literal).
  bool admitsEmpty() const;

  /// Smallest positive set satisfying the guard, ties broken lexicographically.
  /// Restricted to cubes whose positives lie inside `available` when given.
  std::optional<PropSet> minimalWitness(const PropSet* available = nullptr) const;
  /// The cube `minimalWitness` picked it from.
  std::optional<Cube> minimalCube(const PropSet* available = nullptr) const;

  Guard operator|(const Guard& other) const;
  bool operator==(const Guard&) const = default;

 private:
  std::vector<Cube> cubes_;
};

using LabelSequence = std::vector<PropSet>;

struct NfaTransition {
  std::size_t to;
  Guard guard;
};

/// Nondeterministic finite automaton over label sets.
class Nfa {
 public:
  Nfa() = default;
  explicit Nfa(std::size_t states) : out_(states), initial_(states, false), accepting_(states, false) {}

  std::size_t size() const { return out_.size(); }
  std::size_t addState();
  void setInitial(std::size_t s, bool v = true) { initial_.at(s) = v; }
  void setAccepting(std::size_t s, bool v = true) { accepting_.at(s) = v; }
  /// Adds or replaces the guard on (from, to). Unsatisfiable guards are not stored.
  void setTransition(std::size_t from, std::size_t to, Guard guard);

  bool isInitial(std::size_t s) const { return initial_.at(s); }
  bool isAccepting(std::size_t s) const { return accepting_.at(s); }
  std::vector<std::size_t> initialStates() const;
  std::vector<std::size_t> acceptingStates() const;
  /// Outgoing transitions, sorted by target.
  const std::vector<NfaTransition>& out(std::size_t s) const { return out_.at(s); }
  const Guard* guard(std::size_t from, std::size_t to) const;
  std::size_t transitionCount() const;

  /// Keeps only states reachable from an initial state and co-reachable to an
  /// accepting one; renumbers in breadth-first order from the initial states.
  Nfa trimmed() const;

  /// Human readable state descriptions (may be empty).
  std::vector<std::string> stateNames;

 private:
  std::vector<std::vector<NfaTransition>> out_;
  std::vector<bool> initial_;
  std::vector<bool> accepting_;
};

struct NfaOptions {
  std::size_t stateCap = 20000;
};

/// Translates an LTL_f formula into an NFA accepting exactly the finite label
/// sequences satisfying it. States are sets of pending obligations obtained by
/// formula progression.
Nfa toNfa(const Formula& f, const NfaOptions& options = {});

/// Some run starting in an initial state and ending in an accepting state reads `sigma`.
bool nfaAccepts(const Nfa& a, const LabelSequence& sigma);

/// Forward simulation helper: states reachable from `from` after reading `label`.
std::vector<std::size_t> nfaStep(const Nfa& a, const std::vector<std::size_t>& from, const PropSet& label);

/// `states` extended with everything reachable by reading empty labels.
std::vector<std::size_t> idleClosure(const Nfa& a, std::vector<std::size_t> states);

/// Acceptance when any number of empty labels may be observed before, between
/// and after the events of `sigma` (robots moving without performing tasks).
bool nfaAcceptsWithIdle(const Nfa& a, const LabelSequence& sigma);

/// One step of an essential sequence: the minimal positive label and the
/// negative literals of the cube it came from.
struct EssentialStep {
  PropSet positive;
  PropSet negative;
};

/// Per-step minimal positive labels describing `run`.
LabelSequence essentialSequence(const Nfa& a, const std::vector<std::size_t>& run);
std::vector<EssentialStep> essentialSteps(const Nfa& a, const std::vector<std::size_t>& run);

}  // namespace colplan
