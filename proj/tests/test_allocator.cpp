#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "colplan/allocator.hpp"
#include "oracles.hpp"

using namespace colplan;

namespace {

// subsequences of elements of task ids
Mission makeMission(const std::vector<std::vector<std::vector<std::size_t>>>& subsequences) {
  Mission m;
  std::size_t k = 0;
  for (const auto& sub : subsequences) {
    ++k;
    std::size_t mm = 0, l = 0;
    for (const auto& el : sub) {
      Element e;
      e.k = k;
      e.m = ++mm;
      for (std::size_t t : el) {
        e.tasks.insert(PropId(t));
        e.occurrences.push_back(m.occurrences.size());
        m.occurrences.push_back(Occurrence{PropId(t), k, mm, ++l, m.elements.size()});
      }
      m.elements.push_back(e);
    }
  }
  m.subsequenceCount = k;
  return m;
}

std::vector<std::vector<bool>> enumerate(AllocModel model) {
  std::vector<std::vector<bool>> out;
  while (auto a = nextAssignment(model)) out.push_back(a->values());
  return out;
}

}  // namespace

TEST_CASE("two-of-two requirement forces both robots") {
  Fleet fleet;
  CapId c1 = fleet.addCapability("c1");
  fleet.addRobot(Robot{"r1", {c1}, RegionId(0)});
  fleet.addRobot(Robot{"r2", {c1}, RegionId(0)});
  std::vector<TaskReq> tasks{TaskReq{PropId(0), RegionId(0), {{c1, 2}}, std::nullopt}};
  AllocModel model = buildModel(makeMission({{{0}}}), fleet, tasks);
  auto all = enumerate(model);
  REQUIRE(all.size() == 1);
  CHECK(all[0] == std::vector<bool>{true, true});
  REQUIRE(model.cardinality().size() >= 1);
  CHECK(model.cardinality()[0].bound == 2);
}

TEST_CASE("one robot cannot join two tasks of an element") {
  Fleet fleet;
  CapId c1 = fleet.addCapability("c1");
  fleet.addRobot(Robot{"r", {c1}, RegionId(0)});
  std::vector<TaskReq> tasks{TaskReq{PropId(0), RegionId(0), {{c1, 1}}, std::nullopt},
                             TaskReq{PropId(1), RegionId(0), {{c1, 1}}, std::nullopt}};
  AllocModel model = buildModel(makeMission({{{0, 1}}}), fleet, tasks);
  bool found = false;
  for (const auto& c : model.cardinality())
    if (c.bound == 1 && c.lits.size() == 2 && c.lits[0] == Lit{model.var(RobotId(0), 0), true} &&
        c.lits[1] == Lit{model.var(RobotId(0), 1), true})
      found = true;
  CHECK(found);
  auto m = model;
  CHECK_FALSE(nextAssignment(m).has_value());
}

TEST_CASE("communication pairs are optional") {
  Fleet fleet;
  CapId c1 = fleet.addCapability("c1");
  fleet.addRobot(Robot{"r1", {c1}, RegionId(0)});
  fleet.addRobot(Robot{"r2", {c1}, RegionId(0)});
  std::vector<TaskReq> tasks{TaskReq{PropId(0), RegionId(0), {{c1, 1}}, std::nullopt},
                             TaskReq{PropId(1), RegionId(0), {{c1, 1}}, std::nullopt}};
  Mission m = makeMission({{{0}, {1}}});
  CHECK(buildModel(m, fleet, tasks, CommPairs{false, {}}).shared().empty());
  CHECK(buildModel(m, fleet, tasks, CommPairs{true, {}}).shared().size() == 1);
  CHECK(buildModel(m, fleet, tasks, CommPairs{false, {{1, 1}}}).shared().size() == 1);
  CHECK(buildModel(m, fleet, tasks, CommPairs{false, {{1, 2}}}).shared().empty());
}

TEST_CASE("single robot single task has one assignment") {
  Fleet fleet;
  CapId c1 = fleet.addCapability("c1");
  fleet.addRobot(Robot{"r", {c1}, RegionId(0)});
  std::vector<TaskReq> tasks{TaskReq{PropId(0), RegionId(0), {{c1, 1}}, std::nullopt}};
  AllocModel model = buildModel(makeMission({{{0}}}), fleet, tasks);
  auto a = nextAssignment(model);
  REQUIRE(a);
  CHECK(a->get(RobotId(0), 0));
  CHECK(a->robotsOf(0) == std::vector<RobotId>{RobotId(0)});
  CHECK(a->tasksOf(RobotId(0)) == std::vector<std::size_t>{0});
  CHECK_FALSE(nextAssignment(model).has_value());
}

TEST_CASE("interchangeable robots give three assignments") {
  Fleet fleet;
  CapId c1 = fleet.addCapability("c1");
  fleet.addRobot(Robot{"r1", {c1}, RegionId(0)});
  fleet.addRobot(Robot{"r2", {c1}, RegionId(0)});
  std::vector<TaskReq> tasks{TaskReq{PropId(0), RegionId(0), {{c1, 1}}, std::nullopt}};
  auto all = enumerate(buildModel(makeMission({{{0}}}), fleet, tasks));
  std::set<std::vector<bool>> got(all.begin(), all.end());
  CHECK(all.size() == 3);
  CHECK(got == std::set<std::vector<bool>>{{true, false}, {false, true}, {true, true}});
}

TEST_CASE("capacity-infeasible model is unsat at once") {
  Fleet fleet;
  CapId c1 = fleet.addCapability("c1");
  CapId c2 = fleet.addCapability("c2");
  fleet.addRobot(Robot{"r1", {c1}, RegionId(0)});
  std::vector<TaskReq> tasks{TaskReq{PropId(0), RegionId(0), {{c2, 1}}, std::nullopt}};
  AllocModel model = buildModel(makeMission({{{0}}}), fleet, tasks);
  CHECK_FALSE(nextAssignment(model).has_value());
}

TEST_CASE("enumeration equals brute force on random small models") {
  std::mt19937_64 rng(99);
  int models = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Fleet fleet;
    CapId c1 = fleet.addCapability("c1"), c2 = fleet.addCapability("c2");
    std::size_t n = 1 + rng() % 4;
    for (std::size_t r = 0; r < n; ++r) {
      auto m = 1 + rng() % 3;
      std::vector<CapId> caps;
      if (m & 1) caps.push_back(c1);
      if (m & 2) caps.push_back(c2);
      fleet.addRobot(Robot{"r" + std::to_string(r), caps, RegionId(0)});
    }
    std::size_t taskCount = 1 + rng() % 3;
    std::vector<TaskReq> tasks;
    for (std::size_t i = 0; i < taskCount; ++i) {
      TaskReq t{PropId(i), RegionId(0), {}, std::nullopt};
      auto m = 1 + rng() % 3;
      if (m & 1) t.requirements[c1] = 1 + static_cast<int>(rng() % 2);
      if (m & 2) t.requirements[c2] = 1;
      tasks.push_back(t);
    }
    if (n * taskCount > 12) continue;
    // random structure: split tasks into subsequences / elements
    std::vector<std::vector<std::vector<std::size_t>>> subs(1);
    for (std::size_t i = 0; i < taskCount; ++i) {
      auto r = rng() % 3;
      if (i == 0 || r == 0) {
        if (subs.back().empty() || r == 0) subs.back().push_back({});
      } else if (r == 1) {
        subs.push_back({{}});
      }
      if (subs.back().empty()) subs.back().push_back({});
      subs.back().back().push_back(i);
    }
    std::vector<std::vector<std::vector<std::size_t>>> clean;
    for (auto& s : subs) {
      std::vector<std::vector<std::size_t>> els;
      for (auto& e : s)
        if (!e.empty()) els.push_back(e);
      if (!els.empty()) clean.push_back(els);
    }
    Mission mission = makeMission(clean);
    CommPairs comm{rng() % 2 == 0, {}};
    if (!comm.all)
      for (const auto& e : mission.elements)
        if (rng() % 2) comm.pairs.emplace_back(e.k, e.m);

    auto all = enumerate(buildModel(mission, fleet, tasks, comm));
    std::set<std::vector<bool>> got(all.begin(), all.end());
    REQUIRE(got.size() == all.size());  // no repeats

    std::set<std::vector<bool>> expect;
    const std::size_t vars = n * mission.occurrences.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << vars); ++mask) {
      std::vector<bool> x(vars);
      for (std::size_t v = 0; v < vars; ++v) x[v] = mask >> v & 1;
      if (oracle::allocationValid(x, mission, fleet, tasks, comm)) expect.insert(x);
    }
    REQUIRE(got == expect);
    ++models;
  }
  CHECK(models > 100);
}

TEST_CASE("dominance filter") {
  Assignment base(2, 2, {true, false, false, true});
  Assignment more(2, 2, {true, true, false, true});
  Assignment fewer(2, 2, {true, false, false, false});
  CHECK(dominanceFilter({base}, more));
  CHECK(dominanceFilter({base}, base));
  CHECK_FALSE(dominanceFilter({base}, fewer));
  CHECK_FALSE(dominanceFilter({}, base));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Assignment> history;
    auto random = [&] {
      std::vector<bool> v(6);
      for (auto&& b : v) b = rng() % 2;
      return Assignment(3, 2, v);
    };
    for (int h = 0; h < static_cast<int>(rng() % 4); ++h) history.push_back(random());
    Assignment c = random();
    bool expect = false;
    for (const auto& h : history) expect = expect || oracle::covers(c.values(), h.values());
    REQUIRE(dominanceFilter(history, c) == expect);
  }
}

TEST_CASE("model dump lists every constraint") {
  Fleet fleet;
  CapId c1 = fleet.addCapability("c1");
  fleet.addRobot(Robot{"r1", {c1}, RegionId(0)});
  fleet.addRobot(Robot{"r2", {c1}, RegionId(0)});
  std::vector<TaskReq> tasks{TaskReq{PropId(0), RegionId(0), {{c1, 1}}, std::nullopt},
                             TaskReq{PropId(1), RegionId(0), {{c1, 1}}, std::nullopt}};
  AllocModel model = buildModel(makeMission({{{0}, {1}}}), fleet, tasks);
  std::ostringstream os;
  model.dump(os);
  std::string text = os.str();
  CHECK(text.rfind("p alloc 4\n", 0) == 0);
  CHECK(text.find("atleast 1 1 3") != std::string::npos);
  CHECK(text.find("shared") != std::string::npos);
  auto a = nextAssignment(model);
  REQUIRE(a);
  CHECK(model.blockedCount() == 1);
}
