#include "colplan/world.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "colplan/error.hpp"

namespace colplan {

RegionId World::addRegion(std::string name, std::optional<std::pair<int, int>> coord) {
  if (byName_.count(name)) throw Error(ErrorCode::InvalidWorld, "duplicate region '" + name + "'");
  RegionId id(names_.size());
  byName_.emplace(name, id);
  names_.push_back(std::move(name));
  coords_.push_back(coord);
  adj_.emplace_back();
  return id;
}

void World::addEdge(RegionId a, RegionId b, Duration weight) {
  if (a.index() >= regionCount() || b.index() >= regionCount())
    throw Error(ErrorCode::InvalidWorld, "edge references an unknown region");
  if (a == b) throw Error(ErrorCode::InvalidWorld, "self-loop on region " + regionName(a));
  if (!(weight > 0)) throw Error(ErrorCode::InvalidWorld, "edge weights must be positive");
  auto upsert = [&](RegionId from, RegionId to) {
    for (auto& n : adj_[from.index()]) {
      if (n.to == to) {
        n.weight = weight;
        return false;
      }
    }
    auto& list = adj_[from.index()];
    auto it = std::lower_bound(list.begin(), list.end(), to, [](const Neighbor& n, RegionId t) { return n.to < t; });
    list.insert(it, Neighbor{to, weight});
    return true;
  };
  bool added = upsert(a, b);
  upsert(b, a);
  if (added) ++edgeCount_;
}

std::optional<RegionId> World::findRegion(std::string_view name) const {
  auto it = byName_.find(std::string(name));
  if (it == byName_.end()) return std::nullopt;
  return it->second;
}

std::optional<Duration> World::weight(RegionId a, RegionId b) const {
  for (const auto& n : neighbors(a))
    if (n.to == b) return n.weight;
  return std::nullopt;
}

bool World::connected() const {
  if (names_.empty()) return true;
  std::vector<bool> seen(regionCount(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    auto q = stack.back();
    stack.pop_back();
    for (const auto& n : adj_[q]) {
      if (!seen[n.to.index()]) {
        seen[n.to.index()] = true;
        ++count;
        stack.push_back(n.to.index());
      }
    }
  }
  return count == regionCount();
}

void World::validate() const {
  if (names_.empty()) throw Error(ErrorCode::InvalidWorld, "world has no regions");
  if (!connected()) throw Error(ErrorCode::InvalidWorld, "region graph is not connected");
}

World World::grid(int width, int height, Duration weight) {
  if (width <= 0 || height <= 0) throw Error(ErrorCode::InvalidWorld, "grid dimensions must be positive");
  World w;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) w.addRegion("q" + std::to_string(y * width + x), std::make_pair(x, y));
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      RegionId here(static_cast<std::size_t>(y * width + x));
      if (x + 1 < width) w.addEdge(here, RegionId(static_cast<std::size_t>(y * width + x + 1)), weight);
      if (y + 1 < height) w.addEdge(here, RegionId(static_cast<std::size_t>((y + 1) * width + x)), weight);
    }
  }
  return w;
}

CapId Fleet::addCapability(std::string name) {
  if (auto c = findCapability(name)) return *c;
  capNames_.push_back(std::move(name));
  return CapId(capNames_.size() - 1);
}

std::optional<CapId> Fleet::findCapability(std::string_view name) const {
  for (std::size_t i = 0; i < capNames_.size(); ++i)
    if (capNames_[i] == name) return CapId(i);
  return std::nullopt;
}

RobotId Fleet::addRobot(Robot robot) {
  if (robot.caps.empty()) throw Error(ErrorCode::InvalidWorld, "robot '" + robot.name + "' has no capability");
  for (auto c : robot.caps)
    if (c.index() >= capNames_.size()) throw Error(ErrorCode::InvalidWorld, "unknown capability id");
  std::sort(robot.caps.begin(), robot.caps.end());
  robot.caps.erase(std::unique(robot.caps.begin(), robot.caps.end()), robot.caps.end());
  robots_.push_back(std::move(robot));
  return RobotId(robots_.size() - 1);
}

std::optional<RobotId> Fleet::findRobot(std::string_view name) const {
  for (std::size_t i = 0; i < robots_.size(); ++i)
    if (robots_[i].name == name) return RobotId(i);
  return std::nullopt;
}

bool Fleet::hasCapability(RobotId r, CapId c) const {
  const auto& caps = robot(r).caps;
  return std::binary_search(caps.begin(), caps.end(), c);
}

std::vector<RobotId> Fleet::members(CapId c) const {
  std::vector<RobotId> out;
  for (std::size_t i = 0; i < robots_.size(); ++i)
    if (hasCapability(RobotId(i), c)) out.push_back(RobotId(i));
  return out;
}

void validateTasks(const World& world, const Fleet& fleet, const std::vector<TaskReq>& tasks) {
  std::vector<PropId> seen;
  for (const auto& t : tasks) {
    if (t.region.index() >= world.regionCount()) throw Error(ErrorCode::InvalidTask, "task region out of range");
    if (std::find(seen.begin(), seen.end(), t.prop) != seen.end())
      throw Error(ErrorCode::InvalidTask, "proposition used by two tasks");
    seen.push_back(t.prop);
    if (t.requirements.empty()) throw Error(ErrorCode::InvalidTask, "task without requirements");
    for (const auto& [cap, count] : t.requirements) {
      if (cap.index() >= fleet.capabilityCount()) throw Error(ErrorCode::InvalidTask, "unknown capability id");
      if (count < 1) throw Error(ErrorCode::InvalidTask, "requirement counts must be at least 1");
    }
    if (t.owner) {
      if (t.owner->index() >= fleet.size()) throw Error(ErrorCode::InvalidTask, "unknown task owner");
      if (t.requirements.size() != 1 || t.requirements.begin()->second != 1)
        throw Error(ErrorCode::InvalidTask, "individual tasks need exactly one robot of one capability");
      if (!fleet.hasCapability(*t.owner, t.requirements.begin()->first))
        throw Error(ErrorCode::InvalidTask, "owner lacks the capability its task requires");
    }
  }
}

Wts buildWts(const World& world, const Fleet& fleet, const std::vector<TaskReq>& tasks, RobotId robot) {
  if (robot.index() >= fleet.size()) throw Error(ErrorCode::InvalidWorld, "unknown robot id");
  const auto& rb = fleet.robot(robot);
  if (rb.caps.empty()) throw Error(ErrorCode::InvalidWorld, "robot '" + rb.name + "' has no capability");
  if (rb.start.index() >= world.regionCount()) throw Error(ErrorCode::InvalidWorld, "start region out of range");

  Wts w;
  w.robot = robot;
  w.initial = rb.start;
  w.adj.resize(world.regionCount());
  for (std::size_t q = 0; q < world.regionCount(); ++q) w.adj[q] = world.neighbors(RegionId(q));
  w.labels.resize(world.regionCount());
  for (const auto& t : tasks) {
    if (t.region.index() >= world.regionCount()) throw Error(ErrorCode::InvalidTask, "task region out of range");
    bool labeled = false;
    if (t.owner) {
      labeled = *t.owner == robot;
    } else {
      for (const auto& [cap, count] : t.requirements) labeled = labeled || fleet.hasCapability(robot, cap);
    }
    if (labeled) w.labels[t.region.index()].insert(t.prop);
  }
  return w;
}

std::vector<Duration> travelTimes(const Wts& w, RegionId from) {
  const Duration inf = std::numeric_limits<Duration>::infinity();
  std::vector<Duration> dist(w.size(), inf);
  using Item = std::pair<Duration, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist.at(from.index()) = 0;
  pq.push({0, from.index()});
  while (!pq.empty()) {
    auto [d, q] = pq.top();
    pq.pop();
    if (d > dist[q]) continue;
    for (const auto& n : w.adj[q]) {
      Duration nd = d + n.weight;
      if (nd < dist[n.to.index()]) {
        dist[n.to.index()] = nd;
        pq.push({nd, n.to.index()});
      }
    }
  }
  return dist;
}

Duration shortestTravel(const Wts& w, RegionId from, RegionId to) {
  if (from.index() >= w.size() || to.index() >= w.size()) throw Error(ErrorCode::Unreachable, "region out of range");
  if (from == to) return 0;
  Duration d = travelTimes(w, from).at(to.index());
  if (d == std::numeric_limits<Duration>::infinity())
    throw Error(ErrorCode::Unreachable, "no path between regions " + std::to_string(from.v) + " and " + std::to_string(to.v));
  return d;
}

}  // namespace colplan
