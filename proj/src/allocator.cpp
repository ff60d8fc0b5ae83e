#include "colplan/allocator.hpp"

#include <algorithm>
#include <ostream>

#include "colplan/error.hpp"

namespace colplan {

bool CommPairs::contains(std::size_t k, std::size_t m) const {
  return all || std::find(pairs.begin(), pairs.end(), std::make_pair(k, m)) != pairs.end();
}

std::vector<std::size_t> Assignment::tasksOf(RobotId r) const {
  std::vector<std::size_t> out;
  for (std::size_t o = 0; o < occurrences_; ++o)
    if (get(r, o)) out.push_back(o);
  return out;
}

std::vector<RobotId> Assignment::robotsOf(std::size_t occ) const {
  std::vector<RobotId> out;
  for (std::size_t r = 0; r < robots_; ++r)
    if (get(RobotId(r), occ)) out.push_back(RobotId(r));
  return out;
}

void AllocModel::addAtLeast(std::vector<Lit> lits, int bound) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  atLeast_.push_back(AtLeast{std::move(lits), bound});
}

void AllocModel::addSharedRobot(SharedRobot c) { shared_.push_back(std::move(c)); }

void AllocModel::block(const Assignment& a) {
  std::vector<Lit> flipped;
  for (std::uint32_t v = 0; v < varCount(); ++v) flipped.push_back(Lit{v, a.values()[v]});
  addAtLeast(std::move(flipped), 1);
  ++blocked_;
}

namespace {

bool holds(const Lit& l, const std::vector<bool>& values) { return values[l.var] != l.negated; }

// -1 unassigned, 0 false, 1 true
using Partial = std::vector<signed char>;

int value(const Lit& l, const Partial& p) {
  if (p[l.var] < 0) return -1;
  return (p[l.var] == 1) != l.negated ? 1 : 0;
}

class Dpll {
 public:
  explicit Dpll(const AllocModel& m) : m_(m) {}

  std::optional<std::vector<bool>> run() {
    Partial p(m_.varCount(), -1);
    if (!search(p)) return std::nullopt;
    std::vector<bool> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] == 1;
    return out;
  }

 private:
  bool propagate(Partial& p) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& c : m_.cardinality()) {
        int trues = 0;
        int open = 0;
        for (const auto& l : c.lits) {
          int v = value(l, p);
          if (v == 1) ++trues;
          else if (v < 0) ++open;
        }
        if (trues >= c.bound) continue;
        if (trues + open < c.bound) return false;
        if (trues + open == c.bound) {
          for (const auto& l : c.lits) {
            if (value(l, p) < 0) {
              p[l.var] = l.negated ? 0 : 1;
              changed = true;
            }
          }
        }
      }
      for (const auto& c : m_.shared()) {
        bool viable = false;
        for (const auto& [a, b] : c.options) {
          auto possible = [&](const std::vector<Lit>& side) {
            return std::any_of(side.begin(), side.end(), [&](const Lit& l) { return value(l, p) != 0; });
          };
          if (possible(a) && possible(b)) {
            viable = true;
            break;
          }
        }
        if (!viable) return false;
      }
    }
    return true;
  }

  bool search(Partial& p) const {
    if (!propagate(p)) return false;
    auto it = std::find(p.begin(), p.end(), static_cast<signed char>(-1));
    if (it == p.end()) return true;
    std::size_t v = static_cast<std::size_t>(it - p.begin());
    for (signed char choice : {0, 1}) {
      Partial next = p;
      next[v] = choice;
      if (search(next)) {
        p = std::move(next);
        return true;
      }
    }
    return false;
  }

  const AllocModel& m_;
};

}  // namespace

bool AllocModel::satisfiedBy(const std::vector<bool>& values) const {
  if (values.size() != varCount()) return false;
  for (const auto& c : atLeast_) {
    int n = 0;
    for (const auto& l : c.lits) n += holds(l, values) ? 1 : 0;
    if (n < c.bound) return false;
  }
  for (const auto& c : shared_) {
    bool ok = false;
    for (const auto& [a, b] : c.options) {
      auto any = [&](const std::vector<Lit>& side) {
        return std::any_of(side.begin(), side.end(), [&](const Lit& l) { return holds(l, values); });
      };
      if (any(a) && any(b)) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

std::optional<std::vector<bool>> AllocModel::solve() const { return Dpll(*this).run(); }

void AllocModel::dump(std::ostream& os) const {
  auto lit = [](const Lit& l) { return (l.negated ? -1 : 1) * static_cast<long>(l.var + 1); };
  os << "p alloc " << varCount() << '\n';
  for (const auto& c : atLeast_) {
    os << "atleast " << c.bound;
    for (const auto& l : c.lits) os << ' ' << lit(l);
    os << '\n';
  }
  for (const auto& c : shared_) {
    os << "shared";
    for (std::size_t i = 0; i < c.options.size(); ++i) {
      if (i) os << " |";
      for (const auto& l : c.options[i].first) os << ' ' << lit(l);
      os << " ;";
      for (const auto& l : c.options[i].second) os << ' ' << lit(l);
    }
    os << '\n';
  }
}

AllocModel buildModel(const Mission& mission, const Fleet& fleet, const std::vector<TaskReq>& tasks,
                      const CommPairs& commPairs) {
  const std::size_t occs = mission.occurrences.size();
  AllocModel model(fleet.size(), occs);

  auto findTask = [&](PropId p) -> const TaskReq& {
    for (const auto& t : tasks)
      if (t.prop == p) return t;
    throw Error(ErrorCode::InvalidTask, "no requirement for collaborative task id " + std::to_string(p.v));
  };

  // (1) capability counts; robots that cannot contribute are excluded.
  for (std::size_t o = 0; o < occs; ++o) {
    const auto& task = findTask(mission.occurrences[o].task);
    for (const auto& [cap, count] : task.requirements) {
      std::vector<Lit> lits;
      for (auto r : fleet.members(cap)) lits.push_back(Lit{model.var(r, o), false});
      model.addAtLeast(std::move(lits), count);
    }
    for (std::size_t r = 0; r < fleet.size(); ++r) {
      bool useful = false;
      for (const auto& [cap, count] : task.requirements) useful = useful || fleet.hasCapability(RobotId(r), cap);
      if (!useful) model.addAtLeast({Lit{model.var(RobotId(r), o), true}}, 1);
    }
  }

  // (2) at most one task per robot inside an element.
  for (const auto& e : mission.elements) {
    for (std::size_t i = 0; i < e.occurrences.size(); ++i) {
      for (std::size_t j = i + 1; j < e.occurrences.size(); ++j) {
        for (std::size_t r = 0; r < fleet.size(); ++r) {
          model.addAtLeast({Lit{model.var(RobotId(r), e.occurrences[i]), true},
                            Lit{model.var(RobotId(r), e.occurrences[j]), true}},
                           1);
        }
      }
    }
  }

  // (3) consecutive elements share a robot.
  for (std::size_t e = 0; e < mission.elements.size(); ++e) {
    auto prev = mission.previousElement(e);
    if (!prev) continue;
    const auto& a = mission.elements[*prev];
    const auto& b = mission.elements[e];
    if (!commPairs.contains(a.k, a.m)) continue;
    SharedRobot c;
    for (std::size_t r = 0; r < fleet.size(); ++r) {
      std::vector<Lit> first;
      std::vector<Lit> second;
      for (auto o : a.occurrences) first.push_back(Lit{model.var(RobotId(r), o), false});
      for (auto o : b.occurrences) second.push_back(Lit{model.var(RobotId(r), o), false});
      c.options.emplace_back(std::move(first), std::move(second));
    }
    model.addSharedRobot(std::move(c));
  }
  return model;
}

std::optional<Assignment> nextAssignment(AllocModel& model) {
  auto values = model.solve();
  if (!values) return std::nullopt;
  Assignment a(model.robotCount(), model.occurrenceCount(), std::move(*values));
  model.block(a);
  return a;
}

bool dominanceFilter(const std::vector<Assignment>& history, const Assignment& candidate) {
  for (const auto& h : history) {
    if (h.values().size() != candidate.values().size()) continue;
    bool superset = true;
    for (std::size_t i = 0; i < h.values().size() && superset; ++i)
      if (h.values()[i] && !candidate.values()[i]) superset = false;
    if (superset) return true;
  }
  return false;
}

}  // namespace colplan
