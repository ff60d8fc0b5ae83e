#pragma once

#include <optional>
#include <vector>

#include "colplan/error.hpp"
#include "colplan/framework.hpp"
#include "colplan/scenario.hpp"

namespace fixture {

using namespace colplan;

struct Pipeline {
  Instance in;
  Mission mission;
  Assignment a;
  std::vector<RobotPlan> plans;
};

/// Up to `limit` synthesized assignments of a scenario, in enumeration order.
inline std::vector<Pipeline> pipelines(const Scenario& sc, std::size_t limit, std::size_t maxTries = 40) {
  std::vector<Pipeline> out;
  Instance in = compile(sc);
  Mission mission;
  try {
    mission = deriveMission(in, sc.options);
  } catch (const Error&) {
    return out;
  }
  AllocModel model = buildModel(mission, in.fleet, in.tasks, CommPairs{sc.options.commAll, sc.options.commPairs});
  for (std::size_t tries = 0; tries < maxTries && out.size() < limit; ++tries) {
    auto a = nextAssignment(model);
    if (!a) break;
    try {
      auto plans = synthesize(in, mission, *a);
      out.push_back(Pipeline{in, mission, *a, std::move(plans)});
    } catch (const Error&) {
    }
  }
  return out;
}

/// Mission from subsequences of elements of proposition ids.
inline Mission makeMission(const std::vector<std::vector<std::vector<std::size_t>>>& subsequences) {
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

inline std::optional<Pipeline> first(const Scenario& sc) {
  auto all = pipelines(sc, 1);
  if (all.empty()) return std::nullopt;
  return std::move(all.front());
}

}  // namespace fixture
