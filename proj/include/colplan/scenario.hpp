#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "colplan/formula.hpp"
#include "colplan/world.hpp"

namespace colplan {

struct GridSpec {
  int width = 0;
  int height = 0;
  Duration weight = 1;
};

struct WorldSpec {
  std::optional<GridSpec> grid;
  std::vector<std::string> regions;                              // explicit graph
  std::vector<std::tuple<std::string, std::string, Duration>> edges;
};

struct RobotSpec {
  std::string name;
  std::vector<std::string> capabilities;
  std::string start;
  std::string formula = "true";
};

struct IndividualTaskSpec {
  std::string name;
  std::string region;
  std::string owner;
  std::string capability;
};

struct CollaborativeTaskSpec {
  std::string name;
  std::string region;
  std::map<std::string, int> requirements;
};

struct ScenarioOptions {
  double budgetSeconds = 1800;
  std::size_t maxAssignments = 0;  // 0: no cap
  bool commAll = true;
  std::vector<std::pair<std::size_t, std::size_t>> commPairs;  // (k, m) when commAll is false
  std::uint64_t seed = 0;
  bool adjust = true;
  bool oracle = false;
  std::string topology = "complete";
  bool shuffleCandidates = false;
  double exactBudgetSeconds = 60;
  std::size_t exactCap = 10'000'000;
  std::size_t maxSegment = 6;
  std::size_t maxInterleavings = 200000;
  std::size_t nfaStateCap = 20000;
};

/// Scenario file contents (JSON, `"schemaVersion": 1`).
struct Scenario {
  WorldSpec world;
  std::vector<std::string> capabilities;
  std::vector<RobotSpec> robots;
  std::vector<IndividualTaskSpec> individualTasks;
  std::vector<CollaborativeTaskSpec> collaborativeTasks;
  std::string formula = "true";
  ScenarioOptions options;
};

Scenario loadScenario(const std::string& path);
Scenario parseScenario(const std::string& json);
std::string dumpScenario(const Scenario& sc);
void saveScenario(const Scenario& sc, const std::string& path);

/// Resolved, validated scenario.
struct Instance {
  World world;
  Fleet fleet;
  PropTable props;
  std::vector<TaskReq> tasks;
  std::vector<Formula> robotFormulas;  // per robot
  Formula global = Formula::top();
  PropSet collaborative;
};

/// Throws InvalidScenario (or the underlying world/task/syntax error).
Instance compile(const Scenario& sc);

struct GeneratorParams {
  std::size_t robots = 3;
  std::size_t collab = 3;
  int width = 6;
  int height = 6;
  std::uint64_t seed = 0;
  std::size_t individualPerRobot = 2;
  std::size_t capabilities = 3;   // drawn from c1..c3
  int maxRequirement = 2;         // robots per capability per task
  double secondCapability = 0.25; // chance of a robot holding two capabilities
  std::string templateName = "mixed";  // conj | chain | mixed | example
};

/// Reproducible random scenario on a unit-weight grid.
Scenario generate(const GeneratorParams& params);

/// Collaborative formula text for a template over ct1..ctK.
std::string collaborativeTemplate(const std::string& name, std::size_t k);

}  // namespace colplan
