#include "colplan/framework.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <map>

#include "colplan/error.hpp"
#include "colplan/local_planner.hpp"
#include "colplan/nfa.hpp"

namespace colplan {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

}  // namespace

Mission deriveMission(const Instance& in, const ScenarioOptions& options, std::size_t* nfaStates,
                      std::size_t* prunedStates) {
  Nfa global = toNfa(in.global, NfaOptions{options.nfaStateCap});
  if (nfaStates) *nfaStates = global.size();
  Nfa pruned;
  try {
    pruned = pruneNfa(global, in.fleet, in.tasks);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EmptyLanguage) throw;
    throw Error(ErrorCode::InfeasibleMission, "the fleet cannot satisfy the collaborative formula");
  }
  if (prunedStates) *prunedStates = pruned.size();
  auto run = shortestAcceptingRun(pruned);
  auto cuts = decompositionStates(pruned, run, DecompositionOptions{options.maxSegment, options.maxInterleavings});
  return buildMission(pruned, run, cuts);
}

std::vector<RobotPlan> synthesize(const Instance& in, const Mission& mission, const Assignment& a,
                                  std::vector<double>* pruneSeconds) {
  std::vector<RobotPlan> plans;
  plans.reserve(in.fleet.size());
  for (std::size_t r = 0; r < in.fleet.size(); ++r) {
    auto t0 = Clock::now();
    RobotPlan plan;
    plan.robot = RobotId(r);
    plan.occurrences = a.tasksOf(RobotId(r));
    std::vector<std::size_t> ks;
    for (std::size_t o : plan.occurrences) {
      plan.tasks.push_back(mission.occurrences[o].task);
      ks.push_back(mission.occurrences[o].k);
    }
    Formula local = buildLocalFormula(in.robotFormulas[r], plan.tasks, ks);
    Nfa nfa = toNfa(local);
    plan.wts = buildWts(in.world, in.fleet, in.tasks, RobotId(r));
    plan.product = buildProduct(plan.wts, nfa);
    plan.strategy = initialRun(plan.product, plan.tasks);
    plan.pruned = prunePa(plan.product, plan.tasks);
    plan.timeline = computeTimeline(plan.strategy, plan.wts, plan.occurrences);
    plan.timeline.robot = RobotId(r);
    if (pruneSeconds) pruneSeconds->push_back(since(t0));
    plans.push_back(std::move(plan));
  }
  return plans;
}

SimResult execute(const Instance& in, const std::vector<RobotPlan>& plans, const Mission& mission,
                  const Assignment& a) {
  std::vector<Strategy> strategies;
  std::vector<std::vector<std::size_t>> occurrences;
  std::vector<Wts> wts;
  for (const auto& p : plans) {
    strategies.push_back(p.strategy);
    occurrences.push_back(p.occurrences);
    wts.push_back(p.wts);
  }
  Nfa global = toNfa(in.global);
  SimOptions options;
  options.collaborative = in.collaborative;
  options.global = &global;
  return simulate(strategies, occurrences, wts, mission, a, options);
}

RunReport runFramework(const Instance& in, const ScenarioOptions& options, const FrameworkOptions& fw) {
  const auto start = Clock::now();
  RunReport rr;
  rr.mission = deriveMission(in, options, &rr.nfaStates, &rr.prunedNfaStates);

  CommPairs comm{options.commAll, options.commPairs};
  AllocModel model = buildModel(rr.mission, in.fleet, in.tasks, comm);

  ProtocolOptions proto;
  proto.topology = Topology::parseKind(options.topology);
  proto.seed = options.seed;
  proto.adjust = AdjustOptions{options.shuffleCandidates, options.seed};

  ExactOptions exact;
  exact.combinationCap = options.exactCap;
  exact.timeBudgetSeconds = options.exactBudgetSeconds;

  if (fw.emitLpDir) std::filesystem::create_directories(*fw.emitLpDir);

  std::vector<Assignment> history;
  std::optional<Solution> best;
  rr.stopReason = "unsat";
  while (true) {
    if (options.maxAssignments && rr.rows.size() >= options.maxAssignments) {
      rr.stopReason = "cap";
      break;
    }
    if (since(start) > options.budgetSeconds) {
      rr.stopReason = "budget";
      break;
    }
    auto next = nextAssignment(model);
    if (!next) break;
    const Assignment& a = *next;

    AssignmentRow row;
    row.id = rr.rows.size() + 1;
    if (dominanceFilter(history, a)) {
      row.filtered = true;
      row.note = "dominated";
      rr.rows.push_back(std::move(row));
      continue;
    }
    history.push_back(a);

    std::vector<RobotPlan> plans;
    std::vector<double> pruneSeconds;
    try {
      plans = synthesize(in, rr.mission, a, &pruneSeconds);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoAcceptingPath && e.code() != ErrorCode::LevelDisconnected &&
          e.code() != ErrorCode::Unreachable)
        throw;
      row.note = e.what();
      rr.rows.push_back(std::move(row));
      continue;
    }
    row.feasible = true;
    for (double s : pruneSeconds) row.prune_s += s;
    if (!pruneSeconds.empty()) row.prune_s /= static_cast<double>(pruneSeconds.size());
    for (const auto& p : plans) {
      row.productStates += p.product.size();
      row.prunedEdges += p.pruned.edgeCount();
      for (const auto& level : p.pruned.levels) row.delta = std::max(row.delta, level.size());
    }

    if (fw.emitLpDir) {
      MilpModel milp = buildMilp(plans, rr.mission, a);
      emitLp(milp.lp, (std::filesystem::path(*fw.emitLpDir) / ("assignment_" + std::to_string(row.id) + ".lp")).string());
    }

    if (options.oracle) {
      auto t0 = Clock::now();
      try {
        row.J = solveExact(plans, rr.mission, a, exact).J;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::BudgetExceeded) throw;
        row.note = "oracle: budget exceeded";
      }
      row.ip_s = since(t0);
    }

    CostReport initial = computeTimeCost(timelinesOf(plans), rr.mission, a);
    row.tInit = initial.total;
    std::vector<std::string> trace;
    if (options.adjust) {
      auto t0 = Clock::now();
      ProtocolResult pr = runProtocol(plans, rr.mission, a, in.fleet, in.props, proto);
      row.adj_s = since(t0);
      row.tAdjusted = pr.cost.total;
      row.individual = pr.cost.individual;
      row.cycles = pr.cycles;
      row.adjustments = pr.adjustments;
      row.messages = pr.messages;
      row.boundReached = pr.boundReached;
      row.series = pr.history;
      trace = std::move(pr.trace);
    } else {
      row.tAdjusted = initial.total;
      row.individual = initial.individual;
      row.series = {initial.total};
    }

    if (!best || *row.tAdjusted < best->cost.total) {
      Solution s;
      s.row = rr.rows.size();
      s.assignment = a;
      s.cost = computeTimeCost(timelinesOf(plans), rr.mission, a);
      s.plans = std::move(plans);
      s.protocolTrace = std::move(trace);
      best = std::move(s);
    }
    rr.rows.push_back(std::move(row));
  }

  if (best) {
    best->execution = execute(in, best->plans, rr.mission, best->assignment);
    rr.best = std::move(best);
  }
  rr.seconds = since(start);
  return rr;
}

RunReport runFramework(const Scenario& sc) { return runFramework(compile(sc), sc.options); }

}  // namespace colplan
