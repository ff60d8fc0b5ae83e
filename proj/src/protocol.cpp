#include "colplan/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>

#include "colplan/error.hpp"

namespace colplan {

Topology Topology::make(Kind kind, std::size_t robots, std::uint64_t seed) {
  Topology t(robots);
  switch (kind) {
    case Kind::Complete:
      for (std::size_t a = 0; a < robots; ++a)
        for (std::size_t b = a + 1; b < robots; ++b) t.connect(a, b);
      break;
    case Kind::Ring:
      for (std::size_t a = 0; a + 1 < robots; ++a) t.connect(a, a + 1);
      if (robots > 2) t.connect(robots - 1, 0);
      break;
    case Kind::Line:
      for (std::size_t a = 0; a + 1 < robots; ++a) t.connect(a, a + 1);
      break;
    case Kind::Random: {
      std::mt19937_64 rng(seed);
      for (std::size_t a = 1; a < robots; ++a) t.connect(a, std::uniform_int_distribution<std::size_t>(0, a - 1)(rng));
      std::bernoulli_distribution extra(0.3);
      for (std::size_t a = 0; a < robots; ++a)
        for (std::size_t b = a + 1; b < robots; ++b)
          if (extra(rng)) t.connect(a, b);
      break;
    }
  }
  return t;
}

Topology::Kind Topology::parseKind(const std::string& name) {
  if (name == "complete") return Kind::Complete;
  if (name == "ring") return Kind::Ring;
  if (name == "line") return Kind::Line;
  if (name == "random") return Kind::Random;
  throw Error(ErrorCode::InvalidScenario, "unknown topology '" + name + "'");
}

void Topology::connect(std::size_t a, std::size_t b) {
  if (a == b) return;
  auto add = [](std::vector<std::size_t>& v, std::size_t x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
  };
  add(adj_.at(a), b);
  add(adj_.at(b), a);
}

bool Topology::connected() const {
  if (adj_.empty()) return true;
  return std::all_of(adj_.begin(), adj_.end(), [&, i = std::size_t{0}](const auto&) mutable {
    return !route(0, i++).empty();
  });
}

std::vector<std::size_t> Topology::route(std::size_t a, std::size_t b) const {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> parent(adj_.size(), none);
  std::deque<std::size_t> queue{a};
  parent[a] = a;
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    if (u == b) break;
    for (auto v : adj_[u]) {
      if (parent[v] == none) {
        parent[v] = u;
        queue.push_back(v);
      }
    }
  }
  if (parent[b] == none) return {};
  std::vector<std::size_t> path{b};
  while (path.back() != a) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

Duration arrivalScore(const Timeline& tl, std::size_t occurrence, const CostReport& cost) {
  for (std::size_t i = 0; i < tl.occurrences.size(); ++i) {
    if (tl.occurrences[i] != occurrence) continue;
    Duration pre = i > 0 ? cost.occurrenceTime.at(tl.occurrences[i - 1]) - tl.arrival[i - 1] : 0;
    return pre + tl.arrival[i];
  }
  throw Error(ErrorCode::InvalidTask, "robot " + std::to_string(tl.robot.v) + " is not assigned to the task");
}

namespace {

RobotId pickByScore(std::size_t occurrence, const std::vector<Timeline>& timelines, const CostReport& cost,
                    const Assignment& a, bool latest) {
  auto robots = a.robotsOf(occurrence);
  if (robots.empty()) throw Error(ErrorCode::InvalidTask, "task occurrence without robots");
  RobotId best = robots.front();
  Duration bestScore = arrivalScore(timelines.at(best.index()), occurrence, cost);
  for (std::size_t i = 1; i < robots.size(); ++i) {
    Duration s = arrivalScore(timelines.at(robots[i].index()), occurrence, cost);
    if (latest ? s > bestScore : s < bestScore) {
      best = robots[i];
      bestScore = s;
    }
  }
  return best;
}

}  // namespace

RobotId findLatest(std::size_t occurrence, const std::vector<Timeline>& timelines, const CostReport& cost,
                   const Assignment& a) {
  return pickByScore(occurrence, timelines, cost, a, true);
}

RobotId findEarliest(std::size_t occurrence, const std::vector<Timeline>& timelines, const CostReport& cost,
                     const Assignment& a) {
  return pickByScore(occurrence, timelines, cost, a, false);
}

bool adjustStrategy(std::vector<RobotPlan>& plans, std::size_t robot, std::size_t occurrence, bool isLatest,
                    const Mission& mission, const Assignment& a, const AdjustOptions& options) {
  auto& plan = plans.at(robot);
  auto pos = std::find(plan.occurrences.begin(), plan.occurrences.end(), occurrence);
  if (pos == plan.occurrences.end()) return false;
  const std::size_t i = static_cast<std::size_t>(pos - plan.occurrences.begin());

  auto timelines = timelinesOf(plans);
  const auto cost = computeTimeCost(timelines, mission, a);
  const auto& lp = plan.pruned;
  const auto& s = plan.strategy;
  const auto& tl = plan.timeline;
  const auto choice = choiceOf(lp, s);
  const std::size_t anchorPos = i > 0 ? s.collabIndices[i - 1] : 0;
  const std::size_t current = s.run[s.collabIndices[i]];
  const Duration pre = i > 0 ? cost.occurrenceTime[plan.occurrences[i - 1]] - tl.arrival[i - 1] : 0;

  std::vector<std::size_t> candidates;
  for (std::size_t b = 0; b < lp.levels[i + 1].size(); ++b)
    if (lp.levels[i + 1][b] != current) candidates.push_back(b);
  if (options.shuffle) {
    std::mt19937_64 rng(options.seed ^ (robot * 0x9e3779b97f4a7c15ULL) ^ occurrence);
    std::shuffle(candidates.begin(), candidates.end(), rng);
  }

  const auto go = costToGo(lp);
  const Duration anchorArrival = i > 0 ? tl.arrival[i - 1] : 0;
  for (auto b : candidates) {
    const PrunedEdge* e = lp.edge(i, choice[i], b);
    if (!e || go[i + 1][b] == std::numeric_limits<Duration>::infinity()) continue;
    // the prefix up to the anchor is kept, so the new arrival is known before expanding
    const Duration shifted = pre + anchorArrival + e->weight;
    bool role = isLatest ? shifted < tl.arrival[i]
                         : (tl.arrival[i] < shifted && shifted <= cost.occurrenceTime[occurrence]);
    if (!role) continue;

    auto suffix = bestSuffix(lp, i + 1, b);
    Timeline ctl = tl;
    ctl.arrival.resize(i);
    Duration t = anchorArrival + e->weight;
    ctl.arrival.push_back(t);
    for (std::size_t k = 0; k + 1 < suffix.choice.size(); ++k) {
      t += lp.edge(i + 1 + k, suffix.choice[k], suffix.choice[k + 1])->weight;
      if (i + 1 + k < plan.occurrences.size()) ctl.arrival.push_back(t);
    }
    ctl.completion = t;
    timelines[robot] = ctl;
    const bool better = computeTimeCost(timelines, mission, a).total < cost.total;
    timelines[robot] = tl;
    if (!better) continue;

    std::vector<std::size_t> run(s.run.begin(), s.run.begin() + static_cast<std::ptrdiff_t>(anchorPos) + 1);
    run.insert(run.end(), e->path.begin() + 1, e->path.end());
    for (std::size_t k = 0; k + 1 < suffix.choice.size(); ++k) {
      const PrunedEdge* f = lp.edge(i + 1 + k, suffix.choice[k], suffix.choice[k + 1]);
      run.insert(run.end(), f->path.begin() + 1, f->path.end());
    }
    Strategy cand;
    try {
      cand = makeStrategy(plan.product, std::move(run), plan.tasks);
    } catch (const Error&) {
      continue;
    }
    Timeline expanded = computeTimeline(cand, plan.wts, plan.occurrences);
    if (expanded.arrival != ctl.arrival || expanded.completion != ctl.completion) continue;
    expanded.version = tl.version + 1;
    plan.strategy = std::move(cand);
    plan.timeline = std::move(expanded);
    return true;
  }
  return false;
}

namespace {

class NetSim {
 public:
  NetSim(const Topology& topo, std::vector<Timeline> initial, const Fleet& fleet, bool trace,
         ProtocolResult& result)
      : topo_(topo), views_(topo.size(), initial), fleet_(fleet), trace_(trace), result_(result) {}

  /// Floods `msg` from `source` (nullopt: the coordinator reaching every robot).
  void flood(std::optional<std::size_t> source, Msg msg, const std::string& label) {
    const std::size_t n = topo_.size();
    std::vector<bool> handled(n, false);
    struct Delivery {
      std::optional<std::size_t> from;
      std::size_t to;
      std::size_t depth;
      std::vector<char> received;  // robots known to have the message
    };
    std::deque<Delivery> queue;
    if (source) {
      handled[*source] = true;
      msg.received.push_back(RobotId(*source));
      apply(*source, msg);
      std::vector<char> received(n, 0);
      received[*source] = 1;
      for (auto v : topo_.neighbors(*source)) received[v] = 1;
      for (auto v : topo_.neighbors(*source)) queue.push_back({source, v, 1, received});
    } else {
      for (std::size_t v = 0; v < n; ++v) queue.push_back({std::nullopt, v, 1, std::vector<char>(n, 0)});
    }
    std::size_t maxDepth = 0;
    while (!queue.empty()) {
      auto d = std::move(queue.front());
      queue.pop_front();
      ++result_.messages;
      maxDepth = std::max(maxDepth, d.depth);
      log(clock_ + d.depth, d.from, d.to, "MSG", label, msg.count);
      if (handled[d.to]) continue;
      handled[d.to] = true;
      apply(d.to, msg);
      auto received = std::move(d.received);
      received[d.to] = 1;
      std::vector<std::size_t> targets;
      for (auto v : topo_.neighbors(d.to))
        if (!received[v]) targets.push_back(v);
      for (auto v : targets) received[v] = 1;
      for (auto v : targets) queue.push_back({d.to, v, d.depth + 1, received});
    }
    clock_ += maxDepth;
    if (!std::all_of(handled.begin(), handled.end(), [](bool b) { return b; }))
      throw Error(ErrorCode::ProtocolStuck, "message did not reach every robot");
  }

  void token(std::size_t from, std::size_t to, const Msg& msg, const std::string& label) {
    auto path = topo_.route(from, to);
    if (path.empty()) throw Error(ErrorCode::ProtocolStuck, "no route for the token");
    for (std::size_t h = 0; h + 1 < path.size(); ++h) {
      ++clock_;
      ++result_.messages;
      ++result_.tokenHops;
      log(clock_, path[h], path[h + 1], "TOKEN", label, msg.count);
    }
  }

  void updateOwn(std::size_t r, const Timeline& tl) { keepNewest(views_[r][tl.robot.index()], tl); }

  /// Barrier check: every robot sees the same timelines as the planner.
  void checkViews(const std::vector<Timeline>& truth) const {
    for (const auto& v : views_)
      if (v != truth) throw Error(ErrorCode::ProtocolStuck, "robot views diverged");
  }

 private:
  static void keepNewest(Timeline& slot, const Timeline& incoming) {
    if (incoming.version > slot.version) slot = incoming;
  }

  void apply(std::size_t r, const Msg& msg) {
    if (msg.success && msg.timeline) keepNewest(views_[r][msg.timeline->robot.index()], *msg.timeline);
  }

  void log(std::size_t hop, std::optional<std::size_t> from, std::size_t to, const char* kind, const std::string& label,
           std::size_t count) {
    if (!trace_) return;
    std::string line = std::to_string(hop);
    line += ' ';
    line += from ? fleet_.robot(RobotId(*from)).name : std::string("coordinator");
    line += "->";
    line += fleet_.robot(RobotId(to)).name;
    line += ' ';
    line += kind;
    line += ' ';
    line += label;
    line += " count=";
    line += std::to_string(count);
    result_.trace.push_back(std::move(line));
  }

  const Topology& topo_;
  std::vector<std::vector<Timeline>> views_;
  const Fleet& fleet_;
  bool trace_;
  ProtocolResult& result_;
  std::size_t clock_ = 0;
};

}  // namespace

ProtocolResult runProtocol(std::vector<RobotPlan>& plans, const Mission& mission, const Assignment& a,
                           const Fleet& fleet, const PropTable& props, const ProtocolOptions& options) {
  ProtocolResult result;
  const std::size_t n = plans.size();
  auto timelines = timelinesOf(plans);
  result.cost = computeTimeCost(timelines, mission, a);
  result.history.push_back(result.cost.total);
  const std::size_t tasks = mission.occurrences.size();
  if (tasks == 0 || n == 0) return result;

  Topology topo = options.network ? *options.network : Topology::make(options.topology, n, options.seed);
  if (topo.size() != n) throw Error(ErrorCode::InvalidScenario, "topology size does not match the fleet");
  if (!topo.connected()) throw Error(ErrorCode::ProtocolStuck, "communication topology is disconnected");

  Duration minEdge = std::numeric_limits<Duration>::infinity();
  for (const auto& p : plans)
    for (const auto& adj : p.wts.adj)
      for (const auto& nb : adj) minEdge = std::min(minEdge, nb.weight);
  if (!(minEdge < std::numeric_limits<Duration>::infinity())) minEdge = 1;
  result.cycleBound =
      static_cast<std::size_t>(std::floor((result.cost.total - result.cost.individual) / minEdge + 1e-9)) + 1;

  NetSim net(topo, timelines, fleet, options.trace, result);
  auto label = [&](std::size_t task) { return props.name(mission.occurrences[task].task); };

  for (std::size_t r = 0; r < n; ++r) {
    Msg init;
    init.success = true;
    init.sender = RobotId(r);
    init.timeline = timelines[r];
    net.flood(r, init, "-");
  }
  net.flood(std::nullopt, Msg{}, label(0));

  std::size_t count = 0;
  std::size_t task = 0;
  result.cycles = 1;
  auto refresh = [&] {
    timelines = timelinesOf(plans);
    result.cost = computeTimeCost(timelines, mission, a);
  };
  auto broadcast = [&](std::size_t from, bool success, std::size_t next) {
    Msg msg;
    msg.success = success;
    msg.sender = RobotId(from);
    msg.timeline = plans[from].timeline;
    msg.task = next;
    msg.count = count;
    net.updateOwn(from, plans[from].timeline);
    net.flood(from, msg, label(next));
    net.checkViews(timelines);
  };
  auto newCycle = [&] {
    ++result.cycles;
    count = 0;
    if (result.cycles > result.cycleBound) result.boundReached = true;
  };

  while (true) {
    const std::size_t occ = task;
    std::size_t next = task + 1;
    RobotId latest = findLatest(occ, timelines, result.cost, a);
    if (adjustStrategy(plans, latest.index(), occ, true, mission, a, options.adjust)) {
      refresh();
      ++result.adjustments;
      result.history.push_back(result.cost.total);
      ++count;
      if (next == tasks) {
        newCycle();
        next = 0;
      }
      if (result.boundReached) break;
      broadcast(latest.index(), true, next);
      task = next;
      continue;
    }

    RobotId earliest = findEarliest(occ, timelines, result.cost, a);
    Msg carried;
    carried.sender = latest;
    carried.task = occ;
    carried.count = count;
    net.token(latest.index(), earliest.index(), carried, label(occ));
    bool ok = adjustStrategy(plans, earliest.index(), occ, false, mission, a, options.adjust);
    if (ok) {
      refresh();
      ++result.adjustments;
      result.history.push_back(result.cost.total);
      ++count;
    }
    if (next == tasks) {
      if (!ok && count == 0) {
        Msg end;
        end.sender = earliest;
        net.flood(earliest.index(), end, "-");
        break;
      }
      newCycle();
      next = 0;
      if (result.boundReached) break;
    }
    broadcast(earliest.index(), ok, next);
    task = next;
  }
  return result;
}

}  // namespace colplan
