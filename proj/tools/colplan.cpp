#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "colplan/error.hpp"
#include "colplan/framework.hpp"
#include "colplan/scenario.hpp"

namespace {

bool onOff(const std::string& v) { return v == "on"; }

int plan(const std::string& path, const std::string& adjust, const std::string& oracle, const std::string& emitLp,
         double budget, std::size_t maxAssignments, const std::string& seed, const std::string& out) {
  using namespace colplan;
  Scenario sc = loadScenario(path);
  if (!adjust.empty()) sc.options.adjust = onOff(adjust);
  if (!oracle.empty()) sc.options.oracle = onOff(oracle);
  if (budget > 0) sc.options.budgetSeconds = budget;
  if (maxAssignments > 0) sc.options.maxAssignments = maxAssignments;
  if (!seed.empty()) sc.options.seed = std::stoull(seed);
  Instance in = compile(sc);

  FrameworkOptions fw;
  if (!emitLp.empty()) fw.emitLpDir = emitLp;
  RunReport rr;
  try {
    rr = runFramework(in, sc.options, fw);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InfeasibleMission) throw;
    std::cerr << e.what() << "\n";
    return 2;
  }
  writeReport(rr, in, out);

  std::size_t filtered = 0;
  for (const auto& r : rr.rows) filtered += r.filtered ? 1 : 0;
  std::cout << "assignments " << rr.rows.size() << " (filtered " << filtered << "), stop: " << rr.stopReason << "\n";
  if (!rr.best) {
    std::cout << "no feasible assignment\n";
    return rr.budgetExhausted() ? 3 : 2;
  }
  const auto& row = rr.rows[rr.best->row];
  std::cout << "best assignment " << row.id << ": T_colla " << formatDuration(rr.best->cost.total) << " (initial "
            << formatDuration(*row.tInit) << ", individual " << formatDuration(rr.best->cost.individual) << ")";
  if (row.J) std::cout << ", J " << formatDuration(*row.J);
  std::cout << "\nreport written to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-robot collaborative task planner"};
  app.require_subcommand(1);

  auto* planCmd = app.add_subcommand("plan", "plan a scenario");
  std::string scenario, adjust, oracle, emitLp, seed, out = "out";
  double budget = 0;
  std::size_t maxAssignments = 0;
  planCmd->add_option("scenario", scenario, "scenario JSON file")->required();
  planCmd->add_option("--adjust", adjust, "adjusting protocol")->check(CLI::IsMember({"on", "off"}));
  planCmd->add_option("--oracle", oracle, "exact solver per assignment")->check(CLI::IsMember({"on", "off"}));
  planCmd->add_option("--emit-lp", emitLp, "write one LP model per assignment into DIR");
  planCmd->add_option("--budget", budget, "time budget in seconds");
  planCmd->add_option("--max-assignments", maxAssignments, "assignment cap");
  planCmd->add_option("--seed", seed, "seed for topology and candidate order");
  planCmd->add_option("--out", out, "output directory");

  auto* genCmd = app.add_subcommand("generate", "write a random scenario");
  colplan::GeneratorParams params;
  std::vector<int> grid{params.width, params.height};
  std::string output;
  genCmd->add_option("--robots", params.robots, "number of robots")->required();
  genCmd->add_option("--collab", params.collab, "number of collaborative tasks")->required();
  genCmd->add_option("--grid", grid, "grid width and height")->expected(2)->required();
  genCmd->add_option("--seed", params.seed, "random seed")->required();
  genCmd->add_option("--individual", params.individualPerRobot, "individual tasks per robot");
  genCmd->add_option("--template", params.templateName, "collaborative formula: conj, chain, mixed, example");
  genCmd->add_option("--max-requirement", params.maxRequirement, "robots per capability per task");
  genCmd->add_option("-o,--output", output, "file to write (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*planCmd) return plan(scenario, adjust, oracle, emitLp, budget, maxAssignments, seed, out);
    params.width = grid[0];
    params.height = grid[1];
    colplan::Scenario sc = colplan::generate(params);
    if (output.empty()) {
      std::cout << colplan::dumpScenario(sc);
    } else {
      colplan::saveScenario(sc, output);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
