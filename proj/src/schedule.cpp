#include "colplan/schedule.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "colplan/error.hpp"

namespace colplan {

std::optional<Duration> Timeline::arrivalAt(std::size_t occurrence) const {
  for (std::size_t i = 0; i < occurrences.size(); ++i)
    if (occurrences[i] == occurrence) return arrival[i];
  return std::nullopt;
}

Duration stepWeight(const Wts& w, RegionId a, RegionId b) {
  for (const auto& n : w.adj.at(a.index()))
    if (n.to == b) return n.weight;
  throw Error(ErrorCode::Unreachable, "regions " + std::to_string(a.v) + " and " + std::to_string(b.v) + " are not adjacent");
}

Timeline computeTimeline(const Strategy& s, const Wts& w, const std::vector<std::size_t>& occurrences) {
  Timeline tl;
  tl.robot = w.robot;
  tl.occurrences = occurrences;
  std::vector<Duration> prefix(s.walk.size(), 0);
  for (std::size_t j = 1; j < s.walk.size(); ++j) prefix[j] = prefix[j - 1] + stepWeight(w, s.walk[j - 1], s.walk[j]);
  for (std::size_t i = 0; i < occurrences.size(); ++i) tl.arrival.push_back(prefix.at(s.collabIndices.at(i)));
  tl.completion = prefix.empty() ? 0 : prefix.back();
  return tl;
}

CostReport computeTimeCost(const std::vector<Timeline>& timelines, const Mission& mission, const Assignment& a) {
  CostReport c;
  const std::size_t n = timelines.size();
  c.elementTime.assign(mission.elements.size(), 0);
  c.occurrenceTime.assign(mission.occurrences.size(), 0);
  c.delay.assign(n, 0);
  c.robotTotal.assign(n, 0);

  for (std::size_t e = 0; e < mission.elements.size(); ++e) {
    std::vector<std::pair<std::size_t, Duration>> arrivals;
    for (auto occ : mission.elements[e].occurrences) {
      for (auto r : a.robotsOf(occ)) {
        auto t = timelines.at(r.index()).arrivalAt(occ);
        if (!t) throw Error(ErrorCode::InvalidTask, "robot " + std::to_string(r.v) + " has no arrival for an assigned task");
        arrivals.emplace_back(r.index(), *t);
      }
    }
    Duration t = 0;
    for (const auto& [r, arrival] : arrivals) t = std::max(t, arrival + c.delay[r]);
    if (auto prev = mission.previousElement(e)) t = std::max(t, c.elementTime[*prev]);
    for (const auto& [r, arrival] : arrivals) c.delay[r] = t - arrival;
    c.elementTime[e] = t;
    for (auto occ : mission.elements[e].occurrences) c.occurrenceTime[occ] = t;
  }
  for (std::size_t r = 0; r < n; ++r) {
    c.robotTotal[r] = timelines[r].completion + c.delay[r];
    c.total += c.robotTotal[r];
    c.individual += timelines[r].completion;
  }
  return c;
}

namespace {

struct Agent {
  std::size_t pos = 0;
  Duration clock = 0;
  Duration ideal = 0;
  std::size_t next = 0;  // index into the robot's occurrence list
  bool waiting = false;
  bool done = false;
};

}  // namespace

SimResult simulate(const std::vector<Strategy>& strategies, const std::vector<std::vector<std::size_t>>& occurrences,
                   const std::vector<Wts>& wts, const Mission& mission, const Assignment& a,
                   const SimOptions& options) {
  const std::size_t n = strategies.size();
  SimResult out;
  out.localTraces.resize(n);
  std::vector<Agent> agents(n);

  auto individual = [&](std::size_t r, std::size_t j) {
    PropSet local = strategies[r].performed.at(j).minus(options.collaborative);
    for (auto p : local) {
      SimEvent ev;
      ev.time = agents[r].clock;
      ev.kind = SimEvent::Kind::Task;
      ev.robot = RobotId(r);
      ev.task = p;
      ev.robots = {RobotId(r)};
      out.events.push_back(ev);
    }
    out.localTraces[r].push_back(std::move(local));
  };

  auto advance = [&](std::size_t r) {
    const auto& s = strategies[r];
    auto& ag = agents[r];
    while (true) {
      if (ag.next < occurrences[r].size()) {
        std::size_t target = s.collabIndices.at(ag.next);
        if (target < ag.pos)
          throw Error(ErrorCode::DeadlockDetected, "robot " + std::to_string(r) + " passed the position of a pending task");
        if (target == ag.pos) {
          ag.waiting = true;
          return;
        }
      }
      if (ag.pos + 1 >= s.walk.size()) {
        ag.done = true;
        return;
      }
      Duration w = stepWeight(wts[r], s.walk[ag.pos], s.walk[ag.pos + 1]);
      SimEvent ev;
      ev.time = ag.clock;
      ev.kind = SimEvent::Kind::Move;
      ev.robot = RobotId(r);
      ev.from = s.walk[ag.pos];
      ev.to = s.walk[ag.pos + 1];
      out.events.push_back(ev);
      ag.clock += w;
      ag.ideal += w;
      ++ag.pos;
      individual(r, ag.pos);
    }
  };

  for (std::size_t r = 0; r < n; ++r) {
    if (strategies[r].walk.empty()) {
      agents[r].done = true;
      continue;
    }
    individual(r, 0);
    advance(r);
  }

  std::vector<std::size_t> globalStates;
  if (options.global) globalStates = idleClosure(*options.global, options.global->initialStates());

  const std::size_t elements = mission.elements.size();
  std::vector<bool> fired(elements, false);
  std::vector<Duration> fireTime(elements, 0);
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();

  while (true) {
    std::size_t best = none;
    Duration bestTime = 0;
    for (std::size_t e = 0; e < elements; ++e) {
      if (fired[e]) continue;
      auto prev = mission.previousElement(e);
      if (prev && !fired[*prev]) continue;
      Duration t = prev ? fireTime[*prev] : 0;
      bool ready = true;
      for (auto occ : mission.elements[e].occurrences) {
        for (auto r : a.robotsOf(occ)) {
          const auto& ag = agents[r.index()];
          if (!ag.waiting || occurrences[r.index()].at(ag.next) != occ) {
            ready = false;
            break;
          }
          t = std::max(t, ag.clock);
        }
        if (!ready) break;
      }
      if (ready && (best == none || t < bestTime)) {
        best = e;
        bestTime = t;
      }
    }
    if (best == none) break;

    const auto& el = mission.elements[best];
    fired[best] = true;
    fireTime[best] = bestTime;
    out.firingOrder.push_back(best);
    out.globalTrace.push_back(el.tasks);
    if (options.global) {
      globalStates = idleClosure(*options.global, nfaStep(*options.global, globalStates, el.tasks));
      if (globalStates.empty())
        throw Error(ErrorCode::NegativeObligationViolated,
                    "element " + std::to_string(el.k) + "." + std::to_string(el.m) + " fired while forbidden");
    }
    std::vector<std::size_t> released;
    for (auto occ : el.occurrences) {
      SimEvent ev;
      ev.time = bestTime;
      ev.kind = SimEvent::Kind::Task;
      ev.task = mission.occurrences[occ].task;
      ev.robots = a.robotsOf(occ);
      if (!ev.robots.empty()) ev.robot = ev.robots.front();
      out.events.push_back(ev);
      for (auto r : ev.robots) released.push_back(r.index());
    }
    for (auto r : released) {
      auto& ag = agents[r];
      ag.clock = bestTime;
      ag.waiting = false;
      ++ag.next;
    }
    for (auto r : released) advance(r);
  }

  for (std::size_t r = 0; r < n; ++r)
    if (agents[r].waiting)
      throw Error(ErrorCode::DeadlockDetected, "robot " + std::to_string(r) + " waits for a task that can never fire");
  for (std::size_t e = 0; e < elements; ++e)
    if (!fired[e])
      throw Error(ErrorCode::DeadlockDetected,
                  "element " + std::to_string(mission.elements[e].k) + "." + std::to_string(mission.elements[e].m) +
                      " never fired");
  if (options.global &&
      std::none_of(globalStates.begin(), globalStates.end(), [&](std::size_t s) { return options.global->isAccepting(s); }))
    throw Error(ErrorCode::NegativeObligationViolated, "collaborative trace ends outside the accepted language");

  std::stable_sort(out.events.begin(), out.events.end(),
                   [](const SimEvent& x, const SimEvent& y) { return x.time < y.time; });

  auto& c = out.cost;
  c.elementTime = fireTime;
  c.occurrenceTime.assign(mission.occurrences.size(), 0);
  for (std::size_t e = 0; e < elements; ++e)
    for (auto occ : mission.elements[e].occurrences) c.occurrenceTime[occ] = fireTime[e];
  c.delay.assign(n, 0);
  c.robotTotal.assign(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    c.robotTotal[r] = agents[r].clock;
    c.delay[r] = agents[r].clock - agents[r].ideal;
    c.total += c.robotTotal[r];
    c.individual += agents[r].ideal;
  }
  return out;
}

std::string formatDuration(Duration d) {
  std::ostringstream os;
  os.precision(12);
  os << d;
  return os.str();
}

std::vector<std::string> formatEvents(const std::vector<SimEvent>& events, const World& world, const Fleet& fleet,
                                      const PropTable& props) {
  std::vector<std::string> lines;
  for (const auto& ev : events) {
    std::ostringstream os;
    os << formatDuration(ev.time) << ' ';
    if (ev.kind == SimEvent::Kind::Move) {
      os << fleet.robot(ev.robot).name << " MOVE " << world.regionName(ev.from) << ' ' << world.regionName(ev.to);
    } else {
      os << "TASK " << props.name(ev.task) << " ROBOTS ";
      for (std::size_t i = 0; i < ev.robots.size(); ++i) os << (i ? "," : "") << fleet.robot(ev.robots[i]).name;
    }
    lines.push_back(os.str());
  }
  return lines;
}

std::vector<Timeline> timelinesOf(const std::vector<RobotPlan>& plans) {
  std::vector<Timeline> out;
  for (const auto& p : plans) out.push_back(p.timeline);
  return out;
}

}  // namespace colplan
