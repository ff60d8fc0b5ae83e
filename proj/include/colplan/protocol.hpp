#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "colplan/allocator.hpp"
#include "colplan/mission.hpp"
#include "colplan/schedule.hpp"

namespace colplan {

/// Robot communication graph.
class Topology {
 public:
  enum class Kind { Complete, Ring, Line, Random };

  explicit Topology(std::size_t robots = 0) : adj_(robots) {}
  static Topology make(Kind kind, std::size_t robots, std::uint64_t seed = 0);
  static Kind parseKind(const std::string& name);

  void connect(std::size_t a, std::size_t b);
  std::size_t size() const { return adj_.size(); }
  const std::vector<std::size_t>& neighbors(std::size_t r) const { return adj_.at(r); }
  bool connected() const;
  /// BFS shortest route from a to b, both included; ties by lower id.
  std::vector<std::size_t> route(std::size_t a, std::size_t b) const;

 private:
  std::vector<std::vector<std::size_t>> adj_;  // sorted
};

struct Msg {
  bool success = false;
  std::optional<RobotId> sender;
  std::vector<RobotId> received;
  std::optional<Timeline> timeline;
  std::size_t task = 0;  // position in T̃^sort
  std::size_t count = 0;
};

struct Token {
  RobotId source;
  RobotId target;
  Msg msg;
};

/// t(ct^pre) − t_r(ct^pre) + t_r(ct); pre-terms are 0 without a previous task.
Duration arrivalScore(const Timeline& tl, std::size_t occurrence, const CostReport& cost);

/// argmax / argmin of arrivalScore over R(ct); ties go to the lowest id.
RobotId findLatest(std::size_t occurrence, const std::vector<Timeline>& timelines, const CostReport& cost,
                   const Assignment& a);
RobotId findEarliest(std::size_t occurrence, const std::vector<Timeline>& timelines, const CostReport& cost,
                     const Assignment& a);

struct AdjustOptions {
  bool shuffle = false;  // seeded candidate order instead of level index order
  std::uint64_t seed = 0;
};

/// Tries the collaborative states of `occurrence` other than the current
/// one; the first candidate meeting the role condition and lowering T^colla
/// replaces the robot's run. Returns whether the run changed.
bool adjustStrategy(std::vector<RobotPlan>& plans, std::size_t robot, std::size_t occurrence, bool isLatest,
                    const Mission& mission, const Assignment& a, const AdjustOptions& options = {});

struct ProtocolOptions {
  Topology::Kind topology = Topology::Kind::Complete;
  std::optional<Topology> network;  // used instead of `topology` when set
  std::uint64_t seed = 0;
  AdjustOptions adjust;
  bool trace = true;
};

struct ProtocolResult {
  std::size_t cycles = 0;
  std::size_t messages = 0;
  std::size_t tokenHops = 0;
  std::size_t adjustments = 0;
  std::size_t cycleBound = 0;
  bool boundReached = false;
  std::vector<Duration> history;  // T^colla initially and after each accepted adjustment
  std::vector<std::string> trace; // `<hop> <from>-><to> MSG|TOKEN <ct> count=<n>`
  CostReport cost;
};

/// Runs the token/broadcast adjusting protocol on `plans` in place.
/// Throws ProtocolStuck on a disconnected topology.
ProtocolResult runProtocol(std::vector<RobotPlan>& plans, const Mission& mission, const Assignment& a,
                           const Fleet& fleet, const PropTable& props, const ProtocolOptions& options = {});

}  // namespace colplan
