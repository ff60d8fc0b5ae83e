#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "colplan/ids.hpp"

namespace colplan {

struct Neighbor {
  RegionId to;
  Duration weight;
};

/// Undirected region graph shared by all robots.
class World {
 public:
  RegionId addRegion(std::string name, std::optional<std::pair<int, int>> coord = std::nullopt);
  /// Adds or reweights an undirected edge. Weights must be positive.
  void addEdge(RegionId a, RegionId b, Duration weight = 1);

  std::size_t regionCount() const { return names_.size(); }
  std::size_t edgeCount() const { return edgeCount_; }
  const std::string& regionName(RegionId q) const { return names_.at(q.index()); }
  std::optional<RegionId> findRegion(std::string_view name) const;
  std::optional<std::pair<int, int>> coord(RegionId q) const { return coords_.at(q.index()); }
  const std::vector<Neighbor>& neighbors(RegionId q) const { return adj_.at(q.index()); }
  std::optional<Duration> weight(RegionId a, RegionId b) const;

  bool connected() const;
  /// Throws InvalidWorld when empty or disconnected.
  void validate() const;

  /// W x H grid with 4-neighbourhood; region (x, y) has index y * W + x.
  static World grid(int width, int height, Duration weight = 1);

 private:
  std::vector<std::string> names_;
  std::vector<std::optional<std::pair<int, int>>> coords_;
  std::vector<std::vector<Neighbor>> adj_;
  std::unordered_map<std::string, RegionId> byName_;
  std::size_t edgeCount_ = 0;
};

struct Robot {
  std::string name;
  std::vector<CapId> caps;  // sorted
  RegionId start;
};

class Fleet {
 public:
  CapId addCapability(std::string name);
  std::optional<CapId> findCapability(std::string_view name) const;
  const std::string& capabilityName(CapId c) const { return capNames_.at(c.index()); }
  std::size_t capabilityCount() const { return capNames_.size(); }

  RobotId addRobot(Robot robot);
  std::optional<RobotId> findRobot(std::string_view name) const;
  const Robot& robot(RobotId r) const { return robots_.at(r.index()); }
  const std::vector<Robot>& robots() const { return robots_; }
  std::size_t size() const { return robots_.size(); }

  bool hasCapability(RobotId r, CapId c) const;
  /// N_j: robots holding capability `c`, in id order.
  std::vector<RobotId> members(CapId c) const;

 private:
  std::vector<std::string> capNames_;
  std::vector<Robot> robots_;
};

/// A task: proposition, region and capability requirements. Individual tasks
/// carry their owner and a single requirement of count one.
struct TaskReq {
  PropId prop;
  RegionId region;
  std::map<CapId, int> requirements;
  std::optional<RobotId> owner;

  bool collaborative() const { return !owner.has_value(); }
};

/// Checks the task invariants against world and fleet; throws InvalidTask.
void validateTasks(const World& world, const Fleet& fleet, const std::vector<TaskReq>& tasks);

/// A robot's weighted transition system over the shared world.
struct Wts {
  RobotId robot;
  RegionId initial;
  std::vector<std::vector<Neighbor>> adj;
  std::vector<PropSet> labels;

  std::size_t size() const { return adj.size(); }
  const PropSet& label(RegionId q) const { return labels.at(q.index()); }
};

Wts buildWts(const World& world, const Fleet& fleet, const std::vector<TaskReq>& tasks, RobotId robot);

/// Minimum travel time between two regions; throws Unreachable.
Duration shortestTravel(const Wts& w, RegionId from, RegionId to);

/// Single-source distances (infinity when unreachable).
std::vector<Duration> travelTimes(const Wts& w, RegionId from);

}  // namespace colplan
