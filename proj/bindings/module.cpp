#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "colplan/allocator.hpp"
#include "colplan/error.hpp"
#include "colplan/exact.hpp"
#include "colplan/framework.hpp"
#include "colplan/scenario.hpp"

namespace py = pybind11;
using namespace colplan;

namespace {

py::object optional(const std::optional<Duration>& d) { return d ? py::cast(*d) : py::none(); }

py::dict rowDict(const AssignmentRow& r) {
  py::dict d;
  d["id"] = r.id;
  d["filtered"] = r.filtered;
  d["feasible"] = r.feasible;
  d["note"] = r.note;
  d["t_init"] = optional(r.tInit);
  d["t_adjusted"] = optional(r.tAdjusted);
  d["individual"] = optional(r.individual);
  d["J"] = optional(r.J);
  d["cycles"] = r.cycles;
  d["adjustments"] = r.adjustments;
  d["messages"] = r.messages;
  d["bound_reached"] = r.boundReached;
  d["series"] = r.series;
  return d;
}

py::dict modelDict(const LinearModel& lp) {
  py::list names, binary, rows;
  for (const auto& v : lp.variables()) {
    names.append(v.name);
    binary.append(v.binary);
  }
  std::vector<double> objective(lp.variables().size(), 0.0);
  for (const auto& t : lp.objective()) objective[t.var] = t.coef;
  for (const auto& c : lp.constraints()) {
    py::list terms;
    for (const auto& t : c.terms) terms.append(py::make_tuple(t.var, t.coef));
    const char* sense = c.sense == Sense::Le ? "<=" : c.sense == Sense::Ge ? ">=" : "=";
    rows.append(py::make_tuple(c.name, terms, sense, c.rhs));
  }
  py::dict d;
  d["variables"] = names;
  d["binary"] = binary;
  d["objective"] = objective;
  d["rows"] = rows;
  return d;
}

struct PyReport {
  RunReport report;
  Instance instance;
};

PyReport plan(const Scenario& sc, std::optional<std::string> emitLpDir) {
  Instance in = compile(sc);
  FrameworkOptions fw;
  fw.emitLpDir = std::move(emitLpDir);
  RunReport rr = runFramework(in, sc.options, fw);
  return PyReport{std::move(rr), std::move(in)};
}

// MILP and exact optimum of the index-th synthesizable assignment.
py::dict exactProblem(const Scenario& sc, std::size_t index) {
  Instance in = compile(sc);
  Mission mission = deriveMission(in, sc.options);
  AllocModel model = buildModel(mission, in.fleet, in.tasks, CommPairs{sc.options.commAll, sc.options.commPairs});
  std::size_t seen = 0;
  while (auto a = nextAssignment(model)) {
    std::vector<RobotPlan> plans;
    try {
      plans = synthesize(in, mission, *a);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoAcceptingPath && e.code() != ErrorCode::LevelDisconnected) throw;
      continue;
    }
    if (seen++ < index) continue;
    MilpModel m = buildMilp(plans, mission, *a);
    ExactResult ex = solveExact(plans, mission, *a,
                                ExactOptions{sc.options.exactCap, sc.options.exactBudgetSeconds, true});
    py::dict d = modelDict(m.lp);
    d["J"] = ex.J;
    d["initial"] = computeTimeCost(timelinesOf(plans), mission, *a).total;
    return d;
  }
  throw Error(ErrorCode::InfeasibleMission, "fewer than " + std::to_string(index + 1) + " synthesizable assignments");
}

}  // namespace

PYBIND11_MODULE(_colplan, m) {
  m.doc() = "Multi-robot collaborative task planning from LTLf specifications";

  // owned by the module for the interpreter's lifetime
  static PyObject* error = PyErr_NewException("colplan._colplan.ColplanError", PyExc_RuntimeError, nullptr);
  m.attr("ColplanError") = py::handle(error);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error)(e.what());
      exc.attr("code") = std::string(toString(e.code()));
      PyErr_SetObject(error, exc.ptr());
    }
  });

  py::class_<ScenarioOptions>(m, "Options")
      .def_readwrite("budget_seconds", &ScenarioOptions::budgetSeconds)
      .def_readwrite("max_assignments", &ScenarioOptions::maxAssignments)
      .def_readwrite("seed", &ScenarioOptions::seed)
      .def_readwrite("adjust", &ScenarioOptions::adjust)
      .def_readwrite("oracle", &ScenarioOptions::oracle)
      .def_readwrite("topology", &ScenarioOptions::topology)
      .def_readwrite("exact_budget_seconds", &ScenarioOptions::exactBudgetSeconds)
      .def_readwrite("exact_cap", &ScenarioOptions::exactCap);

  py::class_<Scenario>(m, "Scenario")
      .def_static("from_json", &parseScenario, py::arg("text"))
      .def_static("load", &loadScenario, py::arg("path"))
      .def("to_json", &dumpScenario)
      .def("save", &saveScenario, py::arg("path"))
      .def_readwrite("formula", &Scenario::formula)
      .def_readwrite("options", &Scenario::options)
      .def_property_readonly("robots",
                             [](const Scenario& sc) {
                               std::vector<std::string> names;
                               for (const auto& r : sc.robots) names.push_back(r.name);
                               return names;
                             })
      .def_property_readonly("collaborative_tasks", [](const Scenario& sc) {
        std::vector<std::string> names;
        for (const auto& t : sc.collaborativeTasks) names.push_back(t.name);
        return names;
      });

  m.def(
      "generate",
      [](std::size_t robots, std::size_t collab, int width, int height, std::uint64_t seed,
         std::size_t individualPerRobot, const std::string& templateName) {
        GeneratorParams p;
        p.robots = robots;
        p.collab = collab;
        p.width = width;
        p.height = height;
        p.seed = seed;
        p.individualPerRobot = individualPerRobot;
        p.templateName = templateName;
        return generate(p);
      },
      py::arg("robots") = 3, py::arg("collab") = 3, py::arg("width") = 6, py::arg("height") = 6, py::arg("seed") = 0,
      py::arg("individual_per_robot") = 2, py::arg("template") = "mixed",
      "Reproducible random scenario on a unit-weight grid.");

  m.def("collaborative_template", &collaborativeTemplate, py::arg("name"), py::arg("k"));

  py::class_<PyReport>(m, "Report")
      .def_property_readonly("rows",
                             [](const PyReport& r) {
                               py::list rows;
                               for (const auto& row : r.report.rows) rows.append(rowDict(row));
                               return rows;
                             })
      .def_property_readonly("best_cost",
                             [](const PyReport& r) { return r.report.best ? py::cast(r.report.best->cost.total) : py::none(); })
      .def_property_readonly("best_row",
                             [](const PyReport& r) { return r.report.best ? py::cast(r.report.best->row) : py::none(); })
      .def_property_readonly("stop_reason", [](const PyReport& r) { return r.report.stopReason; })
      .def_property_readonly("seconds", [](const PyReport& r) { return r.report.seconds; })
      .def_property_readonly("protocol_trace",
                             [](const PyReport& r) {
                               return r.report.best ? r.report.best->protocolTrace : std::vector<std::string>{};
                             })
      .def("metrics_csv", [](const PyReport& r) { return metricsCsv(r.report); })
      .def("schedule_json", [](const PyReport& r) { return scheduleJson(r.report, r.instance); })
      .def("series_csv", [](const PyReport& r) { return seriesCsv(r.report); })
      .def("write", [](const PyReport& r, const std::string& dir) { writeReport(r.report, r.instance, dir); },
           py::arg("dir"));

  m.def("plan", &plan, py::arg("scenario"), py::arg("emit_lp_dir") = py::none(),
        "Enumerate assignments, synthesize, adjust and keep the cheapest plan.");
  m.def("exact_problem", &exactProblem, py::arg("scenario"), py::arg("index") = 0,
        "MILP rows and exact optimum for one assignment.");
  m.def(
      "parse_lp",
      [](const std::string& text) {
        std::istringstream is(text);
        return modelDict(parseLp(is));
      },
      py::arg("text"));
}
