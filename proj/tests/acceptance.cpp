// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "colplan/allocator.hpp"
#include "colplan/error.hpp"
#include "colplan/exact.hpp"
#include "colplan/framework.hpp"
#include "colplan/protocol.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace colplan;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int n, const std::string& name, const std::function<Outcome()>& check) {
  auto t0 = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s %d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", n, name.c_str(), o.detail.c_str(), since(t0));
  std::fflush(stdout);
}

// Shared desk corpus: one synthesized assignment per generated scenario.
std::vector<fixture::Pipeline> deskCorpus(std::size_t count) {
  std::vector<fixture::Pipeline> out;
  for (std::uint64_t seed = 1000; out.size() < count && seed < 1000 + 4 * count; ++seed) {
    auto p = fixture::first(generate(oracle::deskParams(seed, 4, 4, 7)));
    if (p && !p->mission.occurrences.empty()) out.push_back(std::move(*p));
  }
  return out;
}

Outcome ltlEquivalence() {
  std::mt19937_64 rng(2024);
  auto traces = oracle::allTraces(3, 4);
  std::size_t formulas = 0, checks = 0, bad = 0;
  auto t0 = Clock::now();
  while (formulas < 500) {
    Formula f = oracle::randomFormula(rng, 1 + static_cast<int>(rng() % 4), 3);
    Nfa a = toNfa(f);
    for (const auto& s : traces) {
      if (nfaAccepts(a, s) != oracle::holds(f, s)) ++bad;
      ++checks;
    }
    ++formulas;
  }
  double secs = since(t0);
  std::ostringstream os;
  os << formulas << " formulas x " << traces.size() << " traces, " << bad << " disagreements, " << secs << "s";
  return {bad == 0 && secs < 60, os.str()};
}

bool acceptsLocally(const Formula& f, const LabelSequence& trace) {
  return oracle::holds(f, trace) && nfaAcceptsWithIdle(toNfa(f), trace);
}

Outcome completeness() {
  std::size_t instances = 0, solvable = 0, bad = 0;
  std::string why;
  for (std::uint64_t seed = 0; instances < 50; ++seed) {
    Scenario sc = generate(oracle::deskParams(seed + 5000, 3, 3, 6));
    sc.options.oracle = true;
    sc.options.maxAssignments = 20;
    ++instances;
    Instance in = compile(sc);
    RunReport rr;
    try {
      rr = runFramework(in, sc.options);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InfeasibleMission) throw;
      continue;
    }
    bool anyJ = std::any_of(rr.rows.begin(), rr.rows.end(), [](const AssignmentRow& r) { return r.J.has_value(); });
    if (!anyJ) continue;
    ++solvable;
    if (!rr.best) {
      ++bad;
      why = "no plan returned";
      continue;
    }
    const SimResult& sim = rr.best->execution;
    bool ok = oracle::holds(in.global, sim.globalTrace) && nfaAcceptsWithIdle(toNfa(in.global), sim.globalTrace);
    for (std::size_t r = 0; r < in.robotFormulas.size(); ++r)
      ok = ok && acceptsLocally(in.robotFormulas[r], sim.localTraces[r]);
    if (!ok) {
      ++bad;
      why = "trace rejected, seed " + std::to_string(seed);
    }
  }
  std::ostringstream os;
  os << instances << " instances, " << solvable << " solvable, " << bad << " failures" << (why.empty() ? "" : ": " + why);
  return {bad == 0 && solvable >= 25, os.str()};
}

Outcome monotone(const std::vector<fixture::Pipeline>& corpus) {
  std::size_t runs = 0, adjusted = 0, bad = 0;
  for (const auto& pl : corpus) {
    auto plans = pl.plans;
    ProtocolResult res = runProtocol(plans, pl.mission, pl.a, pl.in.fleet, pl.in.props);
    Duration floor = 0;
    for (const auto& p : pl.plans) floor += shortestPrunedPath(p.pruned).weight;
    bool ok = res.cycles <= res.cycleBound && !res.boundReached;
    for (std::size_t i = 1; i < res.history.size(); ++i) ok = ok && res.history[i] < res.history[i - 1];
    for (auto h : res.history) ok = ok && h >= floor;
    ok = ok && res.cost.total >= res.cost.individual;
    bad += ok ? 0 : 1;
    adjusted += res.adjustments > 0 ? 1 : 0;
    ++runs;
  }
  std::ostringstream os;
  os << runs << " instances, " << adjusted << " adjusted, " << bad << " violations";
  return {bad == 0 && runs == 100, os.str()};
}

Outcome dominance() {
  std::size_t done = 0, skipped = 0, bad = 0;
  std::vector<double> ratios;
  for (std::uint64_t seed = 0; done < 30 && seed < 400; ++seed) {
    GeneratorParams p;
    p.robots = 3 + seed % 3;
    p.collab = 4;
    p.width = p.height = 7;
    p.individualPerRobot = 1;
    p.templateName = "example";
    p.seed = seed + 7000;
    auto pl = fixture::first(generate(p));
    if (!pl) continue;
    auto flat = oracle::flatExact(pl->plans, pl->mission, 3'000'000);
    if (!flat) {
      ++skipped;
      continue;
    }
    ExactResult ex = solveExact(pl->plans, pl->mission, pl->a);
    Duration init = computeTimeCost(timelinesOf(pl->plans), pl->mission, pl->a).total;
    auto plans = pl->plans;
    Duration adj = runProtocol(plans, pl->mission, pl->a, pl->in.fleet, pl->in.props).cost.total;
    if (!(ex.J == *flat && ex.J <= adj && adj <= init)) ++bad;
    if (init > ex.J) ratios.push_back((init - adj) / (init - ex.J));
    ++done;
  }
  std::sort(ratios.begin(), ratios.end());
  double median = ratios.empty() ? 1.0 : ratios[ratios.size() / 2];
  std::ostringstream os;
  os << done << " instances (" << skipped << " over the enumeration cap), " << bad
     << " dominance violations, median optimization ratio " << median << " over " << ratios.size()
     << " with a gap";
  return {bad == 0 && done == 30, os.str()};
}

Outcome fidelity(const std::vector<fixture::Pipeline>& corpus) {
  std::mt19937_64 rng(77);
  std::size_t paths = 0, bad = 0;
  for (const auto& pl : corpus) {
    for (const auto& plan : pl.plans) {
      const auto& lp = plan.pruned;
      if (plan.strategy.weight != shortestPrunedPath(lp).weight) ++bad;
      auto go = costToGo(lp);
      for (int sample = 0; sample < 20; ++sample) {
        std::vector<std::size_t> choice;
        for (std::size_t s = 0; s < lp.levels[0].size(); ++s)
          if (go[0][s] < std::numeric_limits<Duration>::infinity()) choice.push_back(s);
        if (choice.empty()) break;
        choice = {choice[rng() % choice.size()]};
        Duration w = 0;
        for (std::size_t i = 0; i + 1 < lp.levelCount(); ++i) {
          std::vector<const PrunedEdge*> opts;
          for (const auto& e : lp.edges[i])
            if (e.from == choice.back() && go[i + 1][e.to] < std::numeric_limits<Duration>::infinity())
              opts.push_back(&e);
          const PrunedEdge* e = opts[rng() % opts.size()];
          w += e->weight;
          choice.push_back(e->to);
        }
        auto run = expandPath(lp, choice);
        if (oracle::productRunWeight(plan.product, run) != w) ++bad;
        ++paths;
      }
    }
  }
  std::ostringstream os;
  os << paths << " expanded paths, " << bad << " mismatches";
  return {bad == 0 && paths > 0, os.str()};
}

Outcome crossValidation(const std::vector<fixture::Pipeline>& corpus) {
  std::size_t plansChecked = 0, bad = 0;
  for (const auto& pl : corpus) {
    auto plans = pl.plans;
    for (int phase = 0; phase < 2; ++phase) {
      if (phase == 1) runProtocol(plans, pl.mission, pl.a, pl.in.fleet, pl.in.props);
      CostReport cost = computeTimeCost(timelinesOf(plans), pl.mission, pl.a);
      SimResult sim = execute(pl.in, plans, pl.mission, pl.a);
      auto sync = oracle::syncCost(plans, pl.mission);
      if (!(sim.cost == cost && sync.total == cost.total)) ++bad;
      ++plansChecked;
    }
  }
  std::ostringstream os;
  os << plansChecked << " plans, " << bad << " disagreements";
  return {bad == 0, os.str()};
}

Outcome speed() {
  std::size_t runs = 0, faster = 0;
  double worstAdj = 0;
  for (std::uint64_t seed = 0; runs < 20 && seed < 60; ++seed) {
    GeneratorParams p;
    p.robots = 10;
    p.collab = 6;
    p.width = p.height = 20;
    p.templateName = "mixed";
    p.seed = seed + 9000;
    auto pl = fixture::first(generate(p));
    if (!pl) continue;
    // best of three on both sides
    double adj = std::numeric_limits<double>::infinity(), ip = adj;
    for (int rep = 0; rep < 3; ++rep) {
      auto plans = pl->plans;
      auto t0 = Clock::now();
      runProtocol(plans, pl->mission, pl->a, pl->in.fleet, pl->in.props);
      adj = std::min(adj, since(t0));
      t0 = Clock::now();
      try {
        solveExact(pl->plans, pl->mission, pl->a);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::BudgetExceeded) throw;
      }
      ip = std::min(ip, since(t0));
    }
    worstAdj = std::max(worstAdj, adj);
    faster += adj < ip ? 1 : 0;
    ++runs;
  }
  std::ostringstream os;
  os << "adjustment faster in " << faster << "/" << runs << " runs, slowest adjustment " << worstAdj << "s";
  return {runs == 20 && faster * 10 >= runs * 9 && worstAdj < 5, os.str()};
}

Outcome allocator() {
  std::mt19937_64 rng(4242);
  std::size_t models = 0, bad = 0;
  for (int trial = 0; trial < 400; ++trial) {
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
    std::size_t taskCount = 1 + rng() % 4;
    if (n * taskCount > 12) continue;
    std::vector<TaskReq> tasks;
    for (std::size_t i = 0; i < taskCount; ++i) {
      TaskReq t{PropId(i), RegionId(0), {}, std::nullopt};
      auto m = 1 + rng() % 3;
      if (m & 1) t.requirements[c1] = 1 + static_cast<int>(rng() % 2);
      if (m & 2) t.requirements[c2] = 1;
      tasks.push_back(t);
    }
    // random subsequence / element structure
    std::vector<std::vector<std::vector<std::size_t>>> subs{{{0}}};
    for (std::size_t i = 1; i < taskCount; ++i) {
      switch (rng() % 3) {
        case 0: subs.back().back().push_back(i); break;
        case 1: subs.back().push_back({i}); break;
        default: subs.push_back({{i}});
      }
    }
    Mission mission = fixture::makeMission(subs);
    CommPairs comm{rng() % 2 == 0, {}};
    if (!comm.all)
      for (const auto& e : mission.elements)
        if (rng() % 2) comm.pairs.emplace_back(e.k, e.m);

    AllocModel model = buildModel(mission, fleet, tasks, comm);
    std::set<std::vector<bool>> got;
    std::size_t count = 0;
    std::vector<Assignment> history;
    while (auto a = nextAssignment(model)) {
      got.insert(a->values());
      ++count;
      bool expect = false;
      for (const auto& h : history) expect = expect || oracle::covers(a->values(), h.values());
      if (dominanceFilter(history, *a) != expect) ++bad;
      if (!expect) history.push_back(*a);
    }
    std::set<std::vector<bool>> want;
    const std::size_t vars = n * mission.occurrences.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << vars); ++mask) {
      std::vector<bool> x(vars);
      for (std::size_t v = 0; v < vars; ++v) x[v] = mask >> v & 1;
      if (oracle::allocationValid(x, mission, fleet, tasks, comm)) want.insert(x);
    }
    if (got != want || count != got.size()) ++bad;
    ++models;
  }
  std::ostringstream os;
  os << models << " models, " << bad << " disagreements";
  return {bad == 0 && models >= 100, os.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string withoutTimes(const std::string& csv) {
  std::istringstream is(csv);
  std::string line, out;
  std::vector<bool> keep;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char c : line) {
      if (c == '"') quoted = !quoted;
      if (c == ',' && !quoted) {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell += c;
      }
    }
    cells.push_back(cell);
    if (keep.empty())
      for (const auto& h : cells) keep.push_back(!(h.size() > 2 && h.substr(h.size() - 2) == "_s"));
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (i >= keep.size() || keep[i]) out += cells[i] + "|";
    out += "\n";
  }
  return out;
}

Outcome determinism() {
  const char* env = std::getenv("COLPLAN_CLI");
  std::string cli = env ? env : COLPLAN_CLI;
  fs::path dir = fs::temp_directory_path() / ("colplan-acceptance-" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  auto run = [&](const std::string& args) {
    int status = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  std::string d = dir.string();
  bool ok = run("generate --robots 4 --collab 4 --grid 7 7 --seed 31 --template example -o " + d + "/s.json") == 0;
  ok = ok && run("plan " + d + "/s.json --oracle on --seed 5 --out " + d + "/a") == 0;
  ok = ok && run("plan " + d + "/s.json --oracle on --seed 5 --out " + d + "/b") == 0;
  std::string detail = "CLI runs failed";
  if (ok) {
    bool schedule = slurp(dir / "a" / "schedule.json") == slurp(dir / "b" / "schedule.json");
    bool metrics = withoutTimes(slurp(dir / "a" / "metrics.csv")) == withoutTimes(slurp(dir / "b" / "metrics.csv"));
    bool series = slurp(dir / "a" / "tcolla_series.csv") == slurp(dir / "b" / "tcolla_series.csv");
    ok = schedule && metrics && series && !slurp(dir / "a" / "schedule.json").empty();
    detail = std::string("schedule.json ") + (schedule ? "identical" : "differs") + ", metrics.csv " +
             (metrics ? "identical" : "differs") + " without wall times";
  }
  fs::remove_all(dir);
  return {ok, detail};
}

}  // namespace

int main() {
  report(1, "LTLf automaton vs evaluator", ltlEquivalence);
  report(2, "pipeline completeness", completeness);
  auto corpus = deskCorpus(100);
  report(3, "monotonic decrease and floor", [&] { return monotone(corpus); });
  report(4, "oracle dominance chain", dominance);
  report(5, "pruned automaton fidelity", [&] { return fidelity(corpus); });
  report(6, "time cost cross-validation", [&] { return crossValidation(corpus); });
  report(7, "adjustment vs exact speed", speed);
  report(8, "allocator enumeration", allocator);
  report(9, "CLI determinism", determinism);
  return failures == 0 ? 0 : 1;
}
