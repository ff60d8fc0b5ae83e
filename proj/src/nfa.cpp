#include "colplan/nfa.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

#include "colplan/error.hpp"

namespace colplan {

std::size_t Nfa::addState() {
  out_.emplace_back();
  initial_.push_back(false);
  accepting_.push_back(false);
  return out_.size() - 1;
}

void Nfa::setTransition(std::size_t from, std::size_t to, Guard guard) {
  auto& edges = out_.at(from);
  auto it = std::lower_bound(edges.begin(), edges.end(), to,
                             [](const NfaTransition& t, std::size_t target) { return t.to < target; });
  if (guard.unsatisfiable()) {
    if (it != edges.end() && it->to == to) edges.erase(it);
    return;
  }
  if (it != edges.end() && it->to == to) {
    it->guard = std::move(guard);
  } else {
    edges.insert(it, NfaTransition{to, std::move(guard)});
  }
}

std::vector<std::size_t> Nfa::initialStates() const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < size(); ++s)
    if (initial_[s]) out.push_back(s);
  return out;
}

std::vector<std::size_t> Nfa::acceptingStates() const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < size(); ++s)
    if (accepting_[s]) out.push_back(s);
  return out;
}

const Guard* Nfa::guard(std::size_t from, std::size_t to) const {
  const auto& edges = out_.at(from);
  auto it = std::lower_bound(edges.begin(), edges.end(), to,
                             [](const NfaTransition& t, std::size_t target) { return t.to < target; });
  if (it == edges.end() || it->to != to) return nullptr;
  return &it->guard;
}

std::size_t Nfa::transitionCount() const {
  std::size_t n = 0;
  for (const auto& e : out_) n += e.size();
  return n;
}

Nfa Nfa::trimmed() const {
  const std::size_t n = size();
  std::vector<bool> fwd(n, false);
  std::deque<std::size_t> queue;
  for (std::size_t s = 0; s < n; ++s) {
    if (initial_[s]) {
      fwd[s] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    for (const auto& t : out_[s]) {
      if (!fwd[t.to]) {
        fwd[t.to] = true;
        queue.push_back(t.to);
      }
    }
  }
  std::vector<std::vector<std::size_t>> in(n);
  for (std::size_t s = 0; s < n; ++s)
    for (const auto& t : out_[s]) in[t.to].push_back(s);
  std::vector<bool> bwd(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    if (accepting_[s]) {
      bwd[s] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    for (auto p : in[s]) {
      if (!bwd[p]) {
        bwd[p] = true;
        queue.push_back(p);
      }
    }
  }

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> renum(n, kNone);
  std::vector<std::size_t> order;
  for (std::size_t s = 0; s < n; ++s) {
    if (initial_[s] && fwd[s] && bwd[s]) {
      renum[s] = order.size();
      order.push_back(s);
    }
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto& t : out_[order[i]]) {
      if (renum[t.to] == kNone && fwd[t.to] && bwd[t.to]) {
        renum[t.to] = order.size();
        order.push_back(t.to);
      }
    }
  }

  Nfa result(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::size_t s = order[i];
    result.initial_[i] = initial_[s];
    result.accepting_[i] = accepting_[s];
    for (const auto& t : out_[s]) {
      if (renum[t.to] != kNone) result.setTransition(i, renum[t.to], t.guard);
    }
  }
  if (!stateNames.empty()) {
    result.stateNames.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) result.stateNames[i] = stateNames[order[i]];
  }
  return result;
}

namespace {

// Negation normal form with hash-consed nodes.
enum class NK { True, False, Lit, NegLit, And, Or, F, G, U, R };

struct NNode {
  NK kind;
  PropId prop;
  int a = -1;
  int b = -1;
};

struct Term {
  Cube lits;
  std::vector<int> next;  // sorted obligations for the following position

  auto operator<=>(const Term&) const = default;
};

class Progression {
 public:
  int build(const Formula& f, bool negated) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::True: return make(negated ? NK::False : NK::True);
      case K::Atom: return make(negated ? NK::NegLit : NK::Lit, f.prop());
      case K::Not: return build(f.lhs(), !negated);
      case K::And:
        return make(negated ? NK::Or : NK::And, PropId{}, build(f.lhs(), negated), build(f.rhs(), negated));
      case K::Or:
        return make(negated ? NK::And : NK::Or, PropId{}, build(f.lhs(), negated), build(f.rhs(), negated));
      case K::Eventually: return make(negated ? NK::G : NK::F, PropId{}, build(f.lhs(), negated));
      case K::Always: return make(negated ? NK::F : NK::G, PropId{}, build(f.lhs(), negated));
      case K::Until:
        // !(a U b) == !a R !b
        return make(negated ? NK::R : NK::U, PropId{}, build(f.lhs(), negated), build(f.rhs(), negated));
    }
    return make(NK::False);
  }

  const NNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }

  // Top-level conjunction members of a node.
  void flatten(int id, std::vector<int>& out) const {
    const auto& n = node(id);
    if (n.kind == NK::And) {
      flatten(n.a, out);
      flatten(n.b, out);
    } else if (n.kind != NK::True) {
      out.push_back(id);
    }
  }

  bool final(int id) const {
    const auto& n = node(id);
    switch (n.kind) {
      case NK::True: return true;
      case NK::False: return false;
      case NK::Lit: return false;
      case NK::NegLit: return true;
      case NK::And: return final(n.a) && final(n.b);
      case NK::Or: return final(n.a) || final(n.b);
      case NK::F: return false;
      case NK::G: return true;
      case NK::U: return false;
      case NK::R: return true;
    }
    return false;
  }

  const std::vector<Term>& expand(int id) {
    if (auto it = expCache_.find(id); it != expCache_.end()) return it->second;
    std::vector<Term> terms;
    const auto& n = node(id);
    const Term unit{};
    const Term stay{Cube{}, {id}};
    switch (n.kind) {
      case NK::True: terms = {unit}; break;
      case NK::False: break;
      case NK::Lit: terms = {Term{Cube{PropSet{n.prop}, {}}, {}}}; break;
      case NK::NegLit: terms = {Term{Cube{{}, PropSet{n.prop}}, {}}}; break;
      case NK::And: terms = product(expand(n.a), expand(n.b)); break;
      case NK::Or: {
        int a = n.a, b = n.b;
        terms = expand(a);
        const auto& eb = expand(b);
        terms.insert(terms.end(), eb.begin(), eb.end());
        break;
      }
      case NK::F: {
        terms = expand(n.a);
        terms.push_back(stay);
        break;
      }
      case NK::G: terms = product(expand(n.a), {stay}); break;
      case NK::U: {
        int a = n.a, b = n.b;
        terms = expand(b);
        auto rest = product(expand(a), {stay});
        terms.insert(terms.end(), rest.begin(), rest.end());
        break;
      }
      case NK::R: {
        int a = n.a, b = n.b;
        auto alt = expand(a);
        alt.push_back(stay);
        terms = product(expand(b), alt);
        break;
      }
    }
    simplify(terms);
    return expCache_[id] = std::move(terms);
  }

  std::vector<Term> product(const std::vector<Term>& x, const std::vector<Term>& y) const {
    std::vector<Term> out;
    out.reserve(x.size() * y.size());
    for (const auto& a : x) {
      for (const auto& b : y) {
        Term t;
        t.lits.pos = a.lits.pos.unionWith(b.lits.pos);
        t.lits.neg = a.lits.neg.unionWith(b.lits.neg);
        if (t.lits.pos.intersects(t.lits.neg)) continue;
        std::set_union(a.next.begin(), a.next.end(), b.next.begin(), b.next.end(), std::back_inserter(t.next));
        out.push_back(std::move(t));
      }
    }
    simplify(out);
    return out;
  }

  // Removes duplicates and terms implied by a weaker one (fewer literals and
  // fewer obligations accept a superset of suffixes).
  static void simplify(std::vector<Term>& terms) {
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    std::vector<bool> drop(terms.size(), false);
    for (std::size_t i = 0; i < terms.size(); ++i) {
      for (std::size_t j = 0; j < terms.size(); ++j) {
        if (i == j || drop[j]) continue;
        const auto& g = terms[j];
        const auto& s = terms[i];
        if (s.lits.pos.includes(g.lits.pos) && s.lits.neg.includes(g.lits.neg) &&
            std::includes(s.next.begin(), s.next.end(), g.next.begin(), g.next.end())) {
          drop[i] = true;
          break;
        }
      }
    }
    std::vector<Term> kept;
    kept.reserve(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i)
      if (!drop[i]) kept.push_back(std::move(terms[i]));
    terms = std::move(kept);
  }

 private:
  int make(NK kind, PropId prop = PropId{}, int a = -1, int b = -1) {
    // Light algebraic simplification keeps the obligation space small.
    if (kind == NK::And || kind == NK::Or) {
      NK absorbing = kind == NK::And ? NK::False : NK::True;
      NK neutral = kind == NK::And ? NK::True : NK::False;
      if (node(a).kind == absorbing || node(b).kind == absorbing) return make(absorbing);
      if (node(a).kind == neutral) return b;
      if (node(b).kind == neutral) return a;
      if (a == b) return a;
      if (a > b) std::swap(a, b);
    }
    // F false = false and G true = true; F true and G false differ on the empty trace.
    if (kind == NK::F && node(a).kind == NK::False) return a;
    if (kind == NK::G && node(a).kind == NK::True) return a;
    auto key = std::make_tuple(kind, prop.v, a, b);
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(NNode{kind, prop, a, b});
    index_.emplace(key, id);
    return id;
  }

  std::vector<NNode> nodes_;
  std::map<std::tuple<NK, std::uint32_t, int, int>, int> index_;
  std::map<int, std::vector<Term>> expCache_;
};

}  // namespace

Nfa toNfa(const Formula& f, const NfaOptions& options) {
  Progression prog;
  int root = prog.build(f, false);

  Nfa nfa;
  std::map<std::vector<int>, std::size_t> stateIds;
  std::vector<std::vector<int>> states;
  auto intern = [&](std::vector<int> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (auto it = stateIds.find(members); it != stateIds.end()) return it->second;
    if (states.size() >= options.stateCap)
      throw Error(ErrorCode::ResourceLimit, "NFA state cap of " + std::to_string(options.stateCap) + " exceeded");
    std::size_t id = nfa.addState();
    stateIds.emplace(members, id);
    states.push_back(members);
    return id;
  };

  if (prog.node(root).kind == NK::False) return Nfa{};

  std::vector<int> rootMembers;
  prog.flatten(root, rootMembers);
  std::size_t init = intern(rootMembers);
  nfa.setInitial(init);

  for (std::size_t s = 0; s < states.size(); ++s) {
    auto members = states[s];
    bool accepting = std::all_of(members.begin(), members.end(), [&](int m) { return prog.final(m); });
    nfa.setAccepting(s, accepting);

    std::vector<Term> terms{Term{}};
    for (int m : members) terms = prog.product(terms, prog.expand(m));

    std::map<std::size_t, std::vector<Cube>> byTarget;
    for (auto& t : terms) {
      std::vector<int> next;
      for (int m : t.next) prog.flatten(m, next);
      std::size_t target = intern(std::move(next));
      byTarget[target].push_back(t.lits);
    }
    for (auto& [target, cubes] : byTarget) nfa.setTransition(s, target, Guard::fromCubes(std::move(cubes)));
  }
  return nfa.trimmed();
}

std::vector<std::size_t> nfaStep(const Nfa& a, const std::vector<std::size_t>& from, const PropSet& label) {
  std::vector<bool> seen(a.size(), false);
  std::vector<std::size_t> out;
  for (auto s : from) {
    for (const auto& t : a.out(s)) {
      if (!seen[t.to] && t.guard.satisfiedBy(label)) {
        seen[t.to] = true;
        out.push_back(t.to);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool nfaAccepts(const Nfa& a, const LabelSequence& sigma) {
  auto current = a.initialStates();
  for (const auto& label : sigma) {
    if (current.empty()) return false;
    current = nfaStep(a, current, label);
  }
  return std::any_of(current.begin(), current.end(), [&](std::size_t s) { return a.isAccepting(s); });
}

std::vector<std::size_t> idleClosure(const Nfa& a, std::vector<std::size_t> states) {
  std::vector<bool> seen(a.size(), false);
  for (auto s : states) seen[s] = true;
  const PropSet empty;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (const auto& t : a.out(states[i])) {
      if (!seen[t.to] && t.guard.satisfiedBy(empty)) {
        seen[t.to] = true;
        states.push_back(t.to);
      }
    }
  }
  std::sort(states.begin(), states.end());
  return states;
}

bool nfaAcceptsWithIdle(const Nfa& a, const LabelSequence& sigma) {
  auto current = idleClosure(a, a.initialStates());
  for (const auto& label : sigma) {
    if (current.empty()) return false;
    current = idleClosure(a, nfaStep(a, current, label));
  }
  return std::any_of(current.begin(), current.end(), [&](std::size_t s) { return a.isAccepting(s); });
}

std::vector<EssentialStep> essentialSteps(const Nfa& a, const std::vector<std::size_t>& run) {
  std::vector<EssentialStep> out;
  for (std::size_t i = 0; i + 1 < run.size(); ++i) {
    const Guard* g = a.guard(run[i], run[i + 1]);
    if (!g) {
      throw Error(ErrorCode::NoPositiveWitness,
                  "no transition " + std::to_string(run[i]) + " -> " + std::to_string(run[i + 1]));
    }
    auto cube = g->minimalCube();
    if (!cube) throw Error(ErrorCode::NoPositiveWitness, "guard at step " + std::to_string(i) + " is unsatisfiable");
    out.push_back(EssentialStep{cube->pos, cube->neg});
  }
  return out;
}

LabelSequence essentialSequence(const Nfa& a, const std::vector<std::size_t>& run) {
  LabelSequence out;
  for (auto& step : essentialSteps(a, run)) out.push_back(std::move(step.positive));
  return out;
}

}  // namespace colplan
