#include "colplan/mission.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>

#include "colplan/allocator.hpp"
#include "colplan/error.hpp"

namespace colplan {

std::optional<std::size_t> Mission::previousElement(std::size_t e) const {
  const auto& el = elements.at(e);
  if (el.m <= 1 || e == 0) return std::nullopt;
  return e - 1;
}

LabelSequence Mission::labels() const {
  LabelSequence out;
  for (const auto& e : elements) out.push_back(e.tasks);
  return out;
}

LabelSequence Mission::subsequence(std::size_t k) const {
  LabelSequence out;
  for (const auto& e : elements)
    if (e.k == k) out.push_back(e.tasks);
  return out;
}

std::optional<std::size_t> Mission::occurrenceOf(PropId task) const {
  for (std::size_t i = 0; i < occurrences.size(); ++i)
    if (occurrences[i].task == task) return i;
  return std::nullopt;
}

bool staffable(const PropSet& simultaneous, const Fleet& fleet, const std::vector<TaskReq>& tasks) {
  if (simultaneous.empty()) return true;
  Mission m;
  Element e;
  e.k = 1;
  e.m = 1;
  e.tasks = simultaneous;
  std::size_t l = 0;
  for (auto p : simultaneous) {
    e.occurrences.push_back(m.occurrences.size());
    m.occurrences.push_back(Occurrence{p, 1, 1, ++l, 0});
  }
  m.elements.push_back(e);
  m.subsequenceCount = 1;
  auto model = buildModel(m, fleet, tasks, CommPairs{false, {}});
  return model.solve().has_value();
}

Nfa pruneNfa(const Nfa& a, const Fleet& fleet, const std::vector<TaskReq>& tasks) {
  std::map<PropSet, bool> cache;
  auto feasible = [&](const PropSet& pos) {
    auto it = cache.find(pos);
    if (it != cache.end()) return it->second;
    bool ok = staffable(pos, fleet, tasks);
    cache.emplace(pos, ok);
    return ok;
  };

  Nfa out(a.size());
  out.stateNames = a.stateNames;
  for (std::size_t s = 0; s < a.size(); ++s) {
    out.setInitial(s, a.isInitial(s));
    out.setAccepting(s, a.isAccepting(s));
    for (const auto& t : a.out(s)) {
      std::vector<Cube> kept;
      for (const auto& c : t.guard.cubes())
        if (feasible(c.pos)) kept.push_back(c);
      out.setTransition(s, t.to, Guard::fromCubes(std::move(kept)));
    }
  }
  Nfa trimmed = out.trimmed();
  if (trimmed.size() == 0 || trimmed.acceptingStates().empty())
    throw Error(ErrorCode::EmptyLanguage, "no accepting run survives capability pruning");
  return trimmed;
}

std::vector<std::size_t> shortestAcceptingRun(const Nfa& a) {
  const std::size_t n = a.size();
  const std::size_t inf = std::numeric_limits<std::size_t>::max();
  std::vector<std::vector<std::size_t>> in(n);
  for (std::size_t s = 0; s < n; ++s)
    for (const auto& t : a.out(s))
      if (t.to != s) in[t.to].push_back(s);

  std::vector<std::size_t> dist(n, inf);
  std::deque<std::size_t> queue;
  for (std::size_t s = 0; s < n; ++s) {
    if (a.isAccepting(s)) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    for (auto p : in[s]) {
      if (dist[p] == inf) {
        dist[p] = dist[s] + 1;
        queue.push_back(p);
      }
    }
  }

  std::size_t best = inf;
  std::size_t start = inf;
  for (auto s : a.initialStates()) {
    if (dist[s] < best) {
      best = dist[s];
      start = s;
    }
  }
  if (start == inf) throw Error(ErrorCode::EmptyLanguage, "no accepting state is reachable");

  std::vector<std::size_t> run{start};
  while (dist[run.back()] > 0) {
    std::size_t cur = run.back();
    std::size_t next = inf;
    for (const auto& t : a.out(cur)) {
      if (dist[t.to] + 1 == dist[cur]) {
        next = t.to;
        break;  // out lists are sorted by target
      }
    }
    run.push_back(next);
  }
  return run;
}

namespace {

// Multinomial coefficient with saturation at cap + 1.
std::size_t interleavingCount(const std::vector<std::size_t>& sizes, std::size_t cap) {
  double count = 1;
  std::size_t total = 0;
  for (auto s : sizes) {
    for (std::size_t i = 1; i <= s; ++i) {
      ++total;
      count = count * static_cast<double>(total) / static_cast<double>(i);
      if (count > static_cast<double>(cap)) return cap + 1;
    }
  }
  return static_cast<std::size_t>(count + 0.5);
}

class InterleavingCheck {
 public:
  InterleavingCheck(const Nfa& a, const std::vector<LabelSequence>& segs) : a_(a), segs_(segs) {}

  bool run() {
    std::vector<std::size_t> pos(segs_.size(), 0);
    return visit(pos, idleClosure(a_, a_.initialStates()));
  }

 private:
  bool visit(std::vector<std::size_t>& pos, const std::vector<std::size_t>& states) {
    if (states.empty()) return false;
    if (!seen_.insert({pos, states}).second) return true;
    bool done = true;
    for (std::size_t i = 0; i < segs_.size(); ++i) {
      if (pos[i] == segs_[i].size()) continue;
      done = false;
      auto next = idleClosure(a_, nfaStep(a_, states, segs_[i][pos[i]]));
      ++pos[i];
      bool ok = visit(pos, next);
      --pos[i];
      if (!ok) return false;
    }
    if (done) return std::any_of(states.begin(), states.end(), [&](std::size_t s) { return a_.isAccepting(s); });
    return true;
  }

  const Nfa& a_;
  const std::vector<LabelSequence>& segs_;
  std::set<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> seen_;
};

}  // namespace

std::optional<bool> allInterleavingsAccepted(const Nfa& a, const std::vector<LabelSequence>& segments,
                                             std::size_t cap) {
  std::vector<std::size_t> sizes;
  for (const auto& s : segments) sizes.push_back(s.size());
  if (interleavingCount(sizes, cap) > cap) return std::nullopt;
  return InterleavingCheck(a, segments).run();
}

std::vector<std::size_t> decompositionStates(const Nfa& a, const std::vector<std::size_t>& run,
                                             const DecompositionOptions& options) {
  if (run.empty()) return {};
  const std::size_t last = run.size() - 1;
  std::vector<std::size_t> cuts{0};
  if (last == 0) return cuts;

  auto steps = essentialSteps(a, run);
  auto segmentsFor = [&](const std::vector<std::size_t>& positions) {
    std::vector<LabelSequence> segs;
    for (std::size_t i = 0; i + 1 < positions.size(); ++i) {
      LabelSequence seg;
      for (std::size_t s = positions[i]; s < positions[i + 1]; ++s)
        if (!steps[s].positive.empty()) seg.push_back(steps[s].positive);
      segs.push_back(std::move(seg));
    }
    return segs;
  };

  for (std::size_t p = 1; p < last; ++p) {
    const Guard* loop = a.guard(run[p], run[p]);
    if (!loop || !loop->admitsEmpty()) continue;
    auto positions = cuts;
    positions.push_back(p);
    positions.push_back(last);
    auto segs = segmentsFor(positions);
    bool usable = std::all_of(segs.begin(), segs.end(), [&](const LabelSequence& s) {
      return !s.empty() && s.size() <= options.maxSegment;
    });
    if (!usable) continue;
    auto ok = allInterleavingsAccepted(a, segs, options.maxInterleavings);
    if (ok && *ok) cuts.push_back(p);
  }
  cuts.push_back(last);
  return cuts;
}

Mission buildMission(const Nfa& a, const std::vector<std::size_t>& run, const std::vector<std::size_t>& positions) {
  Mission mission;
  mission.run = run;
  std::vector<std::size_t> cuts = positions;
  if (!run.empty()) {
    cuts.push_back(0);
    cuts.push_back(run.size() - 1);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  mission.cuts = cuts;

  auto steps = essentialSteps(a, run);
  PropSet used;
  std::size_t k = 0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    std::size_t m = 0;
    std::size_t l = 0;
    for (std::size_t s = cuts[c]; s < cuts[c + 1]; ++s) {
      const auto& step = steps.at(s);
      if (step.positive.empty()) continue;
      if (m == 0) ++k;
      Element e;
      e.k = k;
      e.m = ++m;
      e.tasks = step.positive;
      e.negative = step.negative;
      for (auto p : step.positive) {
        if (used.contains(p))
          throw Error(ErrorCode::UnsupportedMission,
                      "task id " + std::to_string(p.v) + " occurs more than once in the selected sequence");
        used.insert(p);
        e.occurrences.push_back(mission.occurrences.size());
        mission.occurrences.push_back(Occurrence{p, k, m, ++l, mission.elements.size()});
      }
      mission.elements.push_back(std::move(e));
    }
  }
  mission.subsequenceCount = k;
  return mission;
}

}  // namespace colplan
