#include "colplan/local_planner.hpp"

#include <algorithm>
#include <queue>

#include "colplan/error.hpp"

namespace colplan {

namespace {
constexpr Duration kInf = std::numeric_limits<Duration>::infinity();
constexpr std::size_t npos = ProductPa::npos;
}  // namespace

Formula buildLocalFormula(const Formula& phi, const std::vector<PropId>& ordered,
                          const std::vector<std::size_t>& subsequence) {
  if (ordered.empty()) return phi;
  // Group consecutive tasks by subsequence index.
  std::vector<std::vector<PropId>> chains;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    std::size_t k = i < subsequence.size() ? subsequence[i] : 1;
    if (chains.empty() || (i > 0 && k != (i - 1 < subsequence.size() ? subsequence[i - 1] : 1))) chains.emplace_back();
    chains.back().push_back(ordered[i]);
  }
  std::optional<Formula> tail;
  for (auto chain = chains.rbegin(); chain != chains.rend(); ++chain) {
    // Innermost: ct_last (∧ ◇ tail), then wrap outwards.
    Formula inner = Formula::atom(chain->back());
    if (tail) inner = Formula::conj(inner, Formula::eventually(*tail));
    for (auto it = chain->rbegin() + 1; it != chain->rend(); ++it)
      inner = Formula::conj(Formula::atom(*it), Formula::eventually(inner));
    tail = Formula::eventually(inner);
  }
  return Formula::conj(phi, *tail);
}

std::size_t ProductPa::edgeCount() const {
  std::size_t n = 0;
  for (const auto& e : out_) n += e.size();
  return n;
}

std::size_t ProductPa::find(RegionId q, std::size_t nfaState) const {
  std::size_t key = q.index() * nfaSize_ + nfaState;
  if (key >= index_.size()) return npos;
  return index_[key];
}

const ProductEdge* ProductPa::edge(std::size_t s, std::size_t t) const {
  for (const auto& e : out_.at(s))
    if (e.to == t) return &e;
  return nullptr;
}

const std::vector<std::size_t>& ProductPa::collab(PropId ct) const {
  static const std::vector<std::size_t> empty;
  auto it = collab_.find(ct);
  return it == collab_.end() ? empty : it->second;
}

bool ProductPa::isCollab(std::size_t s, PropId ct) const {
  const auto& c = collab(ct);
  return std::binary_search(c.begin(), c.end(), s);
}

ProductPa buildProduct(const Wts& w, const Nfa& a) {
  ProductPa p;
  p.nfaSize_ = a.size();
  p.index_.assign(w.size() * a.size(), npos);
  std::map<PropSet, std::uint32_t> witnessIds;
  auto internWitness = [&](const PropSet& s) {
    auto [it, inserted] = witnessIds.emplace(s, static_cast<std::uint32_t>(p.witnesses_.size()));
    if (inserted) p.witnesses_.push_back(s);
    return it->second;
  };
  auto add = [&](RegionId q, std::size_t s) {
    std::size_t key = q.index() * p.nfaSize_ + s;
    if (p.index_[key] != npos) return p.index_[key];
    std::size_t id = p.region_.size();
    p.index_[key] = id;
    p.region_.push_back(q);
    p.nfa_.push_back(s);
    p.accepting_.push_back(a.isAccepting(s));
    p.initialWitness_.push_back(static_cast<std::uint32_t>(-1));
    p.out_.emplace_back();
    return id;
  };

  auto better = [](const PropSet& x, const PropSet& y) {
    return x.size() < y.size() || (x.size() == y.size() && x.items() < y.items());
  };

  const PropSet& startLabel = w.label(w.initial);
  for (auto s0 : a.initialStates()) {
    for (const auto& t : a.out(s0)) {
      auto wit = t.guard.minimalWitness(&startLabel);
      if (!wit) continue;
      std::size_t id = add(w.initial, t.to);
      auto cur = p.initialWitness_[id];
      if (cur == static_cast<std::uint32_t>(-1) || better(*wit, p.witnesses_[cur])) {
        p.initialWitness_[id] = internWitness(*wit);
      }
      if (s0 != t.to)
        for (auto prop : *wit) p.collab_[prop].push_back(id);
    }
  }
  for (std::size_t id = 0; id < p.region_.size(); ++id) p.initial_.push_back(id);

  for (std::size_t id = 0; id < p.region_.size(); ++id) {
    RegionId q = p.region_[id];
    std::size_t s = p.nfa_[id];
    for (const auto& nb : w.adj[q.index()]) {
      const PropSet& label = w.label(nb.to);
      for (const auto& t : a.out(s)) {
        auto wit = t.guard.minimalWitness(&label);
        if (!wit) continue;
        std::size_t to = add(nb.to, t.to);
        auto witId = internWitness(*wit);
        p.out_[id].push_back(ProductEdge{to, nb.weight, witId});
        if (s != t.to)
          for (auto prop : *wit) p.collab_[prop].push_back(to);
      }
    }
  }
  for (auto& [prop, states] : p.collab_) {
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
  }
  if (std::none_of(p.accepting_.begin(), p.accepting_.end(), [](bool b) { return b; }))
    throw Error(ErrorCode::NoAcceptingPath, "robot " + std::to_string(w.robot.v) + " cannot reach an accepting state");
  return p;
}

std::vector<std::size_t> ShortestPaths::pathTo(std::size_t target) const {
  std::vector<std::size_t> path;
  if (dist.at(target) == kInf) return path;
  for (std::size_t s = target; s != npos; s = parent[s]) path.push_back(s);
  std::reverse(path.begin(), path.end());
  return path;
}

ShortestPaths dijkstra(const ProductPa& p, const std::vector<std::size_t>& sources) {
  ShortestPaths sp;
  sp.dist.assign(p.size(), kInf);
  sp.parent.assign(p.size(), npos);
  using Item = std::pair<Duration, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (auto s : sources) {
    sp.dist[s] = 0;
    pq.push({0, s});
  }
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > sp.dist[u]) continue;
    for (const auto& e : p.out(u)) {
      Duration nd = d + e.weight;
      if (nd < sp.dist[e.to]) {
        sp.dist[e.to] = nd;
        sp.parent[e.to] = u;
        pq.push({nd, e.to});
      }
    }
  }
  return sp;
}

std::vector<std::size_t> TaskPaths::pathTo(std::size_t target) const {
  if (arrival.at(target) == kInf) return {};
  if (arrivalParent[target] == npos) return {target};
  auto path = interior.pathTo(arrivalParent[target]);
  path.push_back(target);
  return path;
}

TaskPaths taskDijkstra(const ProductPa& p, std::size_t source, PropId ct, bool sourcePerforms) {
  TaskPaths tp;
  tp.arrival.assign(p.size(), kInf);
  tp.arrivalParent.assign(p.size(), npos);
  tp.interior.dist.assign(p.size(), kInf);
  tp.interior.parent.assign(p.size(), npos);
  if (sourcePerforms) {
    tp.arrival[source] = 0;
    return tp;
  }
  using Item = std::pair<Duration, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  tp.interior.dist[source] = 0;
  pq.push({0, source});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > tp.interior.dist[u]) continue;
    for (const auto& e : p.out(u)) {
      Duration nd = d + e.weight;
      if (p.witness(e.witness).contains(ct)) {
        if (p.nfaState(u) != p.nfaState(e.to) && nd < tp.arrival[e.to]) {
          tp.arrival[e.to] = nd;
          tp.arrivalParent[e.to] = u;
        }
        continue;
      }
      if (nd < tp.interior.dist[e.to]) {
        tp.interior.dist[e.to] = nd;
        tp.interior.parent[e.to] = u;
        pq.push({nd, e.to});
      }
    }
  }
  return tp;
}

Strategy makeStrategy(const ProductPa& p, std::vector<std::size_t> run, const std::vector<PropId>& tasks) {
  Strategy s;
  if (run.empty()) throw Error(ErrorCode::NoAcceptingPath, "empty run");
  s.run = std::move(run);
  for (std::size_t j = 0; j < s.run.size(); ++j) {
    s.walk.push_back(p.region(s.run[j]));
    if (j == 0) {
      auto w = p.initialWitness(s.run[0]);
      s.performed.push_back(w == static_cast<std::uint32_t>(-1) ? PropSet{} : p.witness(w));
    } else {
      const ProductEdge* e = p.edge(s.run[j - 1], s.run[j]);
      if (!e) throw Error(ErrorCode::NoAcceptingPath, "run uses a missing product edge");
      s.performed.push_back(p.witness(e->witness));
      s.weight += e->weight;
    }
  }
  std::size_t from = 0;
  for (auto ct : tasks) {
    std::size_t j = from;
    while (j < s.performed.size() && !s.performed[j].contains(ct)) ++j;
    if (j == s.performed.size())
      throw Error(ErrorCode::NoAcceptingPath, "run does not perform task id " + std::to_string(ct.v) + " in order");
    s.collabIndices.push_back(j);
    from = j;
  }
  return s;
}

Strategy initialRun(const ProductPa& p, const std::vector<PropId>& tasks) {
  auto sp = dijkstra(p, p.initial());
  std::size_t best = npos;
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (p.accepting(s) && sp.dist[s] < kInf && (best == npos || sp.dist[s] < sp.dist[best])) best = s;
  }
  if (best == npos) throw Error(ErrorCode::NoAcceptingPath, "no accepting state reachable");
  return makeStrategy(p, sp.pathTo(best), tasks);
}

std::size_t PrunedPa::stateCount() const {
  std::size_t n = 0;
  for (const auto& l : levels) n += l.size();
  return n;
}

std::size_t PrunedPa::edgeCount() const {
  std::size_t n = 0;
  for (const auto& e : edges) n += e.size();
  return n;
}

const PrunedEdge* PrunedPa::edge(std::size_t level, std::size_t from, std::size_t to) const {
  const auto& m = lookup_.at(level);
  auto it = m.find({from, to});
  if (it == m.end()) return nullptr;
  return &edges[level][it->second];
}

std::optional<std::size_t> PrunedPa::indexIn(std::size_t level, std::size_t productState) const {
  const auto& l = levels.at(level);
  auto it = std::find(l.begin(), l.end(), productState);
  if (it == l.end()) return std::nullopt;
  return static_cast<std::size_t>(it - l.begin());
}

Duration PrunedPa::totalWeight() const {
  Duration total = 0;
  for (const auto& level : edges)
    for (const auto& e : level) total += e.weight;
  return total;
}

PrunedPa prunePa(const ProductPa& p, const std::vector<PropId>& tasks) {
  PrunedPa lp;
  lp.tasks = tasks;
  lp.levels.push_back(p.initial());
  for (auto ct : tasks) lp.levels.push_back(p.collab(ct));
  std::vector<std::size_t> accepting;
  for (std::size_t s = 0; s < p.size(); ++s)
    if (p.accepting(s)) accepting.push_back(s);
  lp.levels.push_back(accepting);

  const std::size_t n = lp.levels.size();
  lp.edges.resize(n - 1);
  lp.lookup_.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto& next = lp.levels[i + 1];
    std::vector<std::size_t> nextIndex(p.size(), npos);
    for (std::size_t j = 0; j < next.size(); ++j) nextIndex[next[j]] = j;
    bool lastHop = i + 2 == n;
    for (std::size_t a = 0; a < lp.levels[i].size(); ++a) {
      std::size_t u = lp.levels[i][a];
      if (lastHop) {
        // only the nearest accepting state: nothing after it is timed
        auto sp = dijkstra(p, {u});
        std::size_t best = npos;
        for (std::size_t b = 0; b < next.size(); ++b)
          if (sp.dist[next[b]] < kInf && (best == npos || sp.dist[next[b]] < sp.dist[next[best]])) best = b;
        if (best != npos) lp.edges[i].push_back(PrunedEdge{a, best, sp.dist[next[best]], sp.pathTo(next[best])});
      } else {
        PropId ct = tasks[i];
        auto tp = taskDijkstra(p, u, ct, p.isCollab(u, ct));
        for (std::size_t b = 0; b < next.size(); ++b) {
          if (tp.arrival[next[b]] == kInf) continue;
          lp.edges[i].push_back(PrunedEdge{a, b, tp.arrival[next[b]], tp.pathTo(next[b])});
        }
      }
    }
    if (lastHop) {
      std::vector<std::size_t> used;
      for (const auto& e : lp.edges[i]) used.push_back(e.to);
      std::sort(used.begin(), used.end());
      used.erase(std::unique(used.begin(), used.end()), used.end());
      std::vector<std::size_t> kept;
      for (std::size_t b : used) kept.push_back(next[b]);
      for (auto& e : lp.edges[i]) e.to = static_cast<std::size_t>(std::lower_bound(used.begin(), used.end(), e.to) - used.begin());
      lp.levels[i + 1] = std::move(kept);
    }
    for (std::size_t e = 0; e < lp.edges[i].size(); ++e)
      lp.lookup_[i].emplace(std::make_pair(lp.edges[i][e].from, lp.edges[i][e].to), e);
  }

  // Every level must be reachable from the initial level.
  auto come = costToCome(lp);
  for (std::size_t i = 1; i < n; ++i) {
    if (std::none_of(come[i].begin(), come[i].end(), [](Duration d) { return d < kInf; }))
      throw Error(ErrorCode::LevelDisconnected, "level " + std::to_string(i) + " of the pruned product is unreachable");
  }
  return lp;
}

std::vector<std::vector<Duration>> costToCome(const PrunedPa& lp) {
  std::vector<std::vector<Duration>> c(lp.levels.size());
  for (std::size_t i = 0; i < lp.levels.size(); ++i) c[i].assign(lp.levels[i].size(), kInf);
  if (c.empty()) return c;
  std::fill(c[0].begin(), c[0].end(), 0);
  for (std::size_t i = 0; i + 1 < lp.levels.size(); ++i)
    for (const auto& e : lp.edges[i])
      c[i + 1][e.to] = std::min(c[i + 1][e.to], c[i][e.from] + e.weight);
  return c;
}

std::vector<std::vector<Duration>> costToGo(const PrunedPa& lp) {
  std::vector<std::vector<Duration>> c(lp.levels.size());
  for (std::size_t i = 0; i < lp.levels.size(); ++i) c[i].assign(lp.levels[i].size(), kInf);
  if (c.empty()) return c;
  std::fill(c.back().begin(), c.back().end(), 0);
  for (std::size_t i = lp.levels.size() - 1; i-- > 0;)
    for (const auto& e : lp.edges[i])
      c[i][e.from] = std::min(c[i][e.from], c[i + 1][e.to] + e.weight);
  return c;
}

PrunedPath constrainedPrunedPath(const PrunedPa& lp, const std::vector<std::optional<std::size_t>>& fixed) {
  const std::size_t n = lp.levels.size();
  PrunedPath out;
  if (n == 0) return out;
  std::vector<std::vector<Duration>> best(n);
  std::vector<std::vector<std::size_t>> back(n);
  for (std::size_t i = 0; i < n; ++i) {
    best[i].assign(lp.levels[i].size(), kInf);
    back[i].assign(lp.levels[i].size(), npos);
  }
  auto allowed = [&](std::size_t level, std::size_t idx) {
    return level >= fixed.size() || !fixed[level] || *fixed[level] == idx;
  };
  for (std::size_t a = 0; a < lp.levels[0].size(); ++a)
    if (allowed(0, a)) best[0][a] = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (const auto& e : lp.edges[i]) {
      if (!allowed(i + 1, e.to) || best[i][e.from] == kInf) continue;
      Duration c = best[i][e.from] + e.weight;
      if (c < best[i + 1][e.to] || (c == best[i + 1][e.to] && e.from < back[i + 1][e.to])) {
        best[i + 1][e.to] = c;
        back[i + 1][e.to] = e.from;
      }
    }
  }
  std::size_t end = npos;
  for (std::size_t b = 0; b < lp.levels[n - 1].size(); ++b)
    if (best[n - 1][b] < kInf && (end == npos || best[n - 1][b] < best[n - 1][end])) end = b;
  if (end == npos) return out;
  out.weight = best[n - 1][end];
  out.choice.assign(n, npos);
  out.choice[n - 1] = end;
  for (std::size_t i = n - 1; i > 0; --i) out.choice[i - 1] = back[i][out.choice[i]];
  return out;
}

PrunedPath shortestPrunedPath(const PrunedPa& lp) { return constrainedPrunedPath(lp, {}); }

PrunedPath bestSuffix(const PrunedPa& lp, std::size_t level, std::size_t state) {
  const std::size_t n = lp.levels.size();
  PrunedPath out;
  auto go = costToGo(lp);
  if (go[level][state] == kInf) return out;
  out.weight = go[level][state];
  out.choice.push_back(state);
  std::size_t cur = state;
  for (std::size_t i = level; i + 1 < n; ++i) {
    std::size_t next = npos;
    for (const auto& e : lp.edges[i]) {
      if (e.from != cur) continue;
      if (e.weight + go[i + 1][e.to] == go[i][cur] && (next == npos || e.to < next)) next = e.to;
    }
    out.choice.push_back(next);
    cur = next;
  }
  return out;
}

std::vector<std::size_t> expandPath(const PrunedPa& lp, const std::vector<std::size_t>& choice) {
  std::vector<std::size_t> run;
  if (choice.empty()) return run;
  run.push_back(lp.levels[0].at(choice[0]));
  for (std::size_t i = 0; i + 1 < choice.size(); ++i) {
    const PrunedEdge* e = lp.edge(i, choice[i], choice[i + 1]);
    if (!e) throw Error(ErrorCode::LevelDisconnected, "no pruned edge at level " + std::to_string(i));
    run.insert(run.end(), e->path.begin() + 1, e->path.end());
  }
  return run;
}

std::vector<std::size_t> choiceOf(const PrunedPa& lp, const Strategy& s) {
  std::vector<std::size_t> choice;
  auto pick = [&](std::size_t level, std::size_t state) {
    auto idx = lp.indexIn(level, state);
    if (!idx) throw Error(ErrorCode::LevelDisconnected, "strategy state missing from pruned level " + std::to_string(level));
    choice.push_back(*idx);
  };
  pick(0, s.run.front());
  for (std::size_t i = 0; i < s.collabIndices.size(); ++i) pick(i + 1, s.run[s.collabIndices[i]]);
  pick(lp.levels.size() - 1, s.run.back());
  return choice;
}

ForcedPath pathThrough(const ProductPa& p, std::size_t anchor, std::size_t via, PropId ct, bool anchorPerforms) {
  auto tp = taskDijkstra(p, anchor, ct, anchorPerforms);
  if (tp.arrival.at(via) == kInf) throw Error(ErrorCode::Unreachable, "candidate state not reachable from anchor");
  ForcedPath out;
  out.path = tp.pathTo(via);
  out.toVia = tp.arrival[via];
  auto sp = dijkstra(p, {via});
  std::size_t best = npos;
  for (std::size_t s = 0; s < p.size(); ++s)
    if (p.accepting(s) && sp.dist[s] < kInf && (best == npos || sp.dist[s] < sp.dist[best])) best = s;
  if (best == npos) throw Error(ErrorCode::Unreachable, "no accepting state after the candidate state");
  auto tail = sp.pathTo(best);
  out.path.insert(out.path.end(), tail.begin() + 1, tail.end());
  out.weight = out.toVia + sp.dist[best];
  return out;
}

}  // namespace colplan
