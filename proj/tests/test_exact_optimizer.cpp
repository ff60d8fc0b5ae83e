#include <doctest.h>

#include <sstream>

#include "colplan/error.hpp"
#include "colplan/exact.hpp"
#include "colplan/protocol.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace colplan;

namespace {

Scenario detour(const std::string& r1Start) {
  Scenario sc;
  for (int i = 0; i <= 12; ++i) sc.world.regions.push_back("q" + std::to_string(i));
  for (int i = 0; i < 12; ++i) sc.world.edges.emplace_back("q" + std::to_string(i), "q" + std::to_string(i + 1), 1);
  sc.capabilities = {"c"};
  sc.robots = {RobotSpec{"r0", {"c"}, "q2", "F a"}, RobotSpec{"r1", {"c"}, r1Start, "true"}};
  sc.individualTasks = {IndividualTaskSpec{"a", "q0", "r0", "c"}};
  sc.collaborativeTasks = {CollaborativeTaskSpec{"ct", "q5", {{"c", 2}}}};
  sc.formula = "F ct";
  return sc;
}

double value(const LinearModel& lp, const std::vector<double>& x, const std::string& name) {
  auto v = lp.find(name);
  REQUIRE(v);
  return x[*v];
}

double lhs(const LinearConstraint& c, const std::vector<double>& x) {
  double s = 0;
  for (const auto& t : c.terms) s += t.coef * x[t.var];
  return s;
}

std::vector<std::vector<std::size_t>> initialChoices(const std::vector<RobotPlan>& plans) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& p : plans) out.push_back(choiceOf(p.pruned, p.strategy));
  return out;
}

}  // namespace

TEST_CASE("single robot without collaborations") {
  Scenario sc = detour("q4");
  sc.robots.pop_back();
  sc.collaborativeTasks.clear();
  sc.formula = "true";
  auto pl = fixture::first(sc);
  REQUIRE(pl);
  ExactResult ex = solveExact(pl->plans, pl->mission, pl->a);
  CHECK(ex.J == 2);
  CHECK(ex.J == pl->plans[0].strategy.weight);
  CHECK(ex.cost.total == ex.J);

  // one path only: its edge variables are all selected
  MilpModel m = buildMilp(pl->plans, pl->mission, pl->a);
  auto x = milpValuation(m, pl->plans, pl->mission, pl->a, ex.choices);
  for (const auto& level : m.edge[0])
    for (auto y : level) CHECK(x[y] == 1);
  CHECK(value(m.lp, x, "t_0_end") == 2);
  CHECK_FALSE(m.lp.violated(x));
}

TEST_CASE("two robots: four combinations") {
  auto pl = fixture::first(detour("q4"));
  REQUIRE(pl);
  ExactResult ex = solveExact(pl->plans, pl->mission, pl->a, ExactOptions{10'000'000, 60, false});
  CHECK(ex.J == 11);
  CHECK(ex.J == oracle::flatExact(pl->plans, pl->mission));
  CHECK(ex.strategies[0].collabIndices.size() == 1);
  CHECK(ex.cost == computeTimeCost({computeTimeline(ex.strategies[0], pl->plans[0].wts, pl->plans[0].occurrences),
                                    computeTimeline(ex.strategies[1], pl->plans[1].wts, pl->plans[1].occurrences)},
                                   pl->mission, pl->a));
  CHECK(solveExact(pl->plans, pl->mission, pl->a).J == 11);
}

TEST_CASE("a task done alone waits for nobody") {
  Scenario sc = detour("q4");
  sc.collaborativeTasks[0].requirements = {{"c", 1}};
  sc.robots[0].formula = "true";
  sc.individualTasks.clear();
  for (auto& pl : fixture::pipelines(sc, 3)) {
    MilpModel m = buildMilp(pl.plans, pl.mission, pl.a);
    ExactResult ex = solveExact(pl.plans, pl.mission, pl.a);
    auto x = milpValuation(m, pl.plans, pl.mission, pl.a, ex.choices);
    CHECK_FALSE(m.lp.violated(x));
    if (pl.a.robotsOf(0).size() != 1) continue;
    std::size_t r = pl.a.robotsOf(0)[0].index();
    CHECK(x[m.latest[0]] == x[m.arrival[r][0]]);
    CHECK(x[m.delay[r][0]] == 0);
  }
}

TEST_CASE("exact optimum equals flat enumeration") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    Scenario sc = generate(oracle::deskParams(seed, 3, 3, 6));
    for (auto& pl : fixture::pipelines(sc, 2)) {
      auto flat = oracle::flatExact(pl.plans, pl.mission, 200'000);
      if (!flat) continue;
      ExactResult ex = solveExact(pl.plans, pl.mission, pl.a);
      ExactResult full = solveExact(pl.plans, pl.mission, pl.a, ExactOptions{10'000'000, 60, false});
      CHECK(ex.J == *flat);
      CHECK(full.J == *flat);
      CostReport init = computeTimeCost(timelinesOf(pl.plans), pl.mission, pl.a);
      CHECK(ex.J <= init.total);
      auto plans = pl.plans;
      runProtocol(plans, pl.mission, pl.a, pl.in.fleet, pl.in.props);
      CHECK(ex.J <= computeTimeCost(timelinesOf(plans), pl.mission, pl.a).total);
      // the witness strategies are real runs with cost J
      for (std::size_t r = 0; r < pl.plans.size(); ++r)
        CHECK(oracle::productRunWeight(pl.plans[r].product, ex.strategies[r].run) == ex.strategies[r].weight);
      ++checked;
    }
  }
  CHECK(checked > 40);
}

TEST_CASE("MILP valuations match the time cost") {
  int checked = 0;
  for (std::uint64_t seed = 200; seed < 260; ++seed) {
    Scenario sc = generate(oracle::deskParams(seed, 3, 3, 6));
    for (auto& pl : fixture::pipelines(sc, 2)) {
      MilpModel m = buildMilp(pl.plans, pl.mission, pl.a);
      ExactResult ex = solveExact(pl.plans, pl.mission, pl.a);
      for (const auto& choices : {ex.choices, initialChoices(pl.plans)}) {
        auto x = milpValuation(m, pl.plans, pl.mission, pl.a, choices);
        CHECK_FALSE(m.lp.violated(x));
        std::vector<Timeline> tls;
        for (std::size_t r = 0; r < pl.plans.size(); ++r) {
          RobotOption opt;
          opt.choice = choices[r];
          const auto& lp = pl.plans[r].pruned;
          for (std::size_t i = 0; i + 1 < lp.levelCount(); ++i) opt.legs.push_back(lp.edge(i, choices[r][i], choices[r][i + 1])->weight);
          tls.push_back(optionTimeline(pl.plans[r], opt));
        }
        CHECK(m.lp.objectiveValue(x) == doctest::Approx(computeTimeCost(tls, pl.mission, pl.a).total));
        // big-M rows bind exactly on selected edges
        for (const auto& c : m.lp.constraints()) {
          bool upper = c.name.rfind("tu_", 0) == 0, lower = c.name.rfind("tl_", 0) == 0;
          if (!upper && !lower) continue;
          auto y = m.lp.find("y_" + c.name.substr(3));
          REQUIRE(y);
          double slack = upper ? c.rhs - lhs(c, x) : lhs(c, x) - c.rhs;
          if (x[*y] == 1)
            CHECK(slack == doctest::Approx(0));
          else
            CHECK(slack > 0);
        }
      }
      CHECK(m.lp.objectiveValue(milpValuation(m, pl.plans, pl.mission, pl.a, ex.choices)) == doctest::Approx(ex.J));
      ++checked;
    }
  }
  CHECK(checked > 30);
}

TEST_CASE("LP text round trip") {
  auto pl = fixture::first(detour("q4"));
  REQUIRE(pl);
  MilpModel m = buildMilp(pl->plans, pl->mission, pl->a);
  std::ostringstream os;
  writeLp(m.lp, os);
  const std::string text = os.str();
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("Binaries") != std::string::npos);
  CHECK(text.find("big-M") != std::string::npos);
  CHECK(text.find("z_1_1") != std::string::npos);
  std::istringstream is(text);
  LinearModel back = parseLp(is);
  CHECK(equivalent(m.lp, back));
  CHECK(back.constraints().size() == m.lp.constraints().size());

  LinearModel changed = back;
  changed.addConstraint("extra", {{0, 1}}, Sense::Le, 1);
  CHECK_FALSE(equivalent(m.lp, changed));

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (auto& p : fixture::pipelines(generate(oracle::deskParams(seed, 3, 3, 6)), 1)) {
      MilpModel mm = buildMilp(p.plans, p.mission, p.a);
      std::ostringstream o2;
      writeLp(mm.lp, o2);
      std::istringstream i2(o2.str());
      CHECK(equivalent(mm.lp, parseLp(i2)));
    }
  }
}

TEST_CASE("empty model") {
  MilpModel m = buildMilp({}, Mission{}, Assignment(0, 0, {}));
  CHECK(m.lp.variables().empty());
  CHECK(m.lp.constraints().empty());
  CHECK(m.lp.objectiveValue({}) == 0);
  std::ostringstream os;
  writeLp(m.lp, os);
  std::istringstream is(os.str());
  LinearModel back = parseLp(is);
  CHECK(back.constraints().empty());
  CHECK(equivalent(m.lp, back));
  CHECK(solveExact({}, Mission{}, Assignment(0, 0, {})).J == 0);
}

TEST_CASE("malformed LP text and unwritable files") {
  std::istringstream bad("Minimize\n obj: 2 x +\nSubject To\n c1: x >= \nEnd\n");
  CHECK_THROWS_AS(parseLp(bad), SyntaxError);
  std::istringstream noEnd("Maximize\n obj: x\n");
  CHECK_THROWS_AS(parseLp(noEnd), Error);
  try {
    emitLp(LinearModel{}, "/nonexistent-dir/x.lp");
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::Io));
  }
}

TEST_CASE("search space limits") {
  auto pl = fixture::first(detour("q4"));
  REQUIRE(pl);
  try {
    solveExact(pl->plans, pl->mission, pl->a, ExactOptions{1, 60, false});
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::BudgetExceeded));
  }
  auto opts = robotOptions(pl->plans[0].pruned, false);
  CHECK(opts.size() == 2);
  CHECK(robotOptions(pl->plans[1].pruned, true).size() == 1);
}
