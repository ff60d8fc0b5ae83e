#include "colplan/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "colplan/error.hpp"
#include "colplan/protocol.hpp"

namespace colplan {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidScenario, what); }

const json& field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) invalid(where + ": missing '" + key + "'");
  return *it;
}

template <class T>
T as(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    invalid(where + ": " + e.what());
  }
}

template <class T>
T optional(const json& j, const char* key, T fallback, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return as<T>(*it, where + "." + key);
}

WorldSpec readWorld(const json& j) {
  WorldSpec w;
  if (!j.is_object()) invalid("world must be an object");
  if (j.contains("grid")) {
    const json& g = j["grid"];
    GridSpec grid;
    grid.width = as<int>(field(g, "width", "world.grid"), "world.grid.width");
    grid.height = as<int>(field(g, "height", "world.grid"), "world.grid.height");
    grid.weight = optional<double>(g, "weight", 1.0, "world.grid");
    w.grid = grid;
  } else {
    w.regions = as<std::vector<std::string>>(field(j, "regions", "world"), "world.regions");
    for (const json& e : field(j, "edges", "world")) {
      if (!e.is_array() || e.size() < 2 || e.size() > 3) invalid("world.edges: expected [a, b] or [a, b, weight]");
      Duration wt = e.size() == 3 ? as<double>(e[2], "world.edges") : 1.0;
      w.edges.emplace_back(as<std::string>(e[0], "world.edges"), as<std::string>(e[1], "world.edges"), wt);
    }
  }
  return w;
}

ScenarioOptions readOptions(const json& j) {
  ScenarioOptions o;
  if (j.is_null()) return o;
  if (!j.is_object()) invalid("options must be an object");
  const std::string w = "options";
  o.budgetSeconds = optional<double>(j, "budgetSeconds", o.budgetSeconds, w);
  o.maxAssignments = optional<std::size_t>(j, "maxAssignments", o.maxAssignments, w);
  if (j.contains("commPairs")) {
    const json& c = j["commPairs"];
    if (c.is_string()) {
      if (c.get<std::string>() != "all") invalid("options.commPairs: expected \"all\" or a list of [k, m]");
    } else {
      o.commAll = false;
      for (const json& p : c) {
        auto v = as<std::vector<std::size_t>>(p, "options.commPairs");
        if (v.size() != 2) invalid("options.commPairs: expected [k, m]");
        o.commPairs.emplace_back(v[0], v[1]);
      }
    }
  }
  o.seed = optional<std::uint64_t>(j, "seed", o.seed, w);
  o.adjust = optional<bool>(j, "adjust", o.adjust, w);
  o.oracle = optional<bool>(j, "oracle", o.oracle, w);
  o.topology = optional<std::string>(j, "topology", o.topology, w);
  o.shuffleCandidates = optional<bool>(j, "shuffleCandidates", o.shuffleCandidates, w);
  o.exactBudgetSeconds = optional<double>(j, "exactBudgetSeconds", o.exactBudgetSeconds, w);
  o.exactCap = optional<std::size_t>(j, "exactCap", o.exactCap, w);
  o.maxSegment = optional<std::size_t>(j, "maxSegment", o.maxSegment, w);
  o.maxInterleavings = optional<std::size_t>(j, "maxInterleavings", o.maxInterleavings, w);
  o.nfaStateCap = optional<std::size_t>(j, "nfaStateCap", o.nfaStateCap, w);
  return o;
}

json writeOptions(const ScenarioOptions& o) {
  json j;
  j["budgetSeconds"] = o.budgetSeconds;
  j["maxAssignments"] = o.maxAssignments;
  if (o.commAll) {
    j["commPairs"] = "all";
  } else {
    json pairs = json::array();
    for (auto [k, m] : o.commPairs) pairs.push_back({k, m});
    j["commPairs"] = pairs;
  }
  j["seed"] = o.seed;
  j["adjust"] = o.adjust;
  j["oracle"] = o.oracle;
  j["topology"] = o.topology;
  j["shuffleCandidates"] = o.shuffleCandidates;
  j["exactBudgetSeconds"] = o.exactBudgetSeconds;
  j["exactCap"] = o.exactCap;
  j["maxSegment"] = o.maxSegment;
  j["maxInterleavings"] = o.maxInterleavings;
  j["nfaStateCap"] = o.nfaStateCap;
  return j;
}

}  // namespace

Scenario parseScenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SyntaxError(ErrorCode::InvalidScenario, e.byte > 0 ? e.byte - 1 : 0, "malformed JSON");
  }
  if (!j.is_object()) invalid("scenario must be a JSON object");
  int version = as<int>(field(j, "schemaVersion", "scenario"), "schemaVersion");
  if (version != 1) invalid("unsupported schemaVersion " + std::to_string(version));

  Scenario sc;
  sc.world = readWorld(field(j, "world", "scenario"));

  const json& fleet = field(j, "fleet", "scenario");
  sc.capabilities = as<std::vector<std::string>>(field(fleet, "capabilities", "fleet"), "fleet.capabilities");
  for (const json& r : field(fleet, "robots", "fleet")) {
    RobotSpec spec;
    spec.name = as<std::string>(field(r, "name", "robot"), "robot.name");
    const std::string where = "robot '" + spec.name + "'";
    spec.capabilities = as<std::vector<std::string>>(field(r, "capabilities", where), where);
    spec.start = as<std::string>(field(r, "start", where), where);
    spec.formula = optional<std::string>(r, "formula", "true", where);
    sc.robots.push_back(std::move(spec));
  }

  if (j.contains("individualTasks")) {
    for (const json& t : j["individualTasks"]) {
      IndividualTaskSpec spec;
      spec.name = as<std::string>(field(t, "name", "individual task"), "individual task");
      const std::string where = "task '" + spec.name + "'";
      spec.region = as<std::string>(field(t, "region", where), where);
      spec.owner = as<std::string>(field(t, "owner", where), where);
      spec.capability = as<std::string>(field(t, "capability", where), where);
      sc.individualTasks.push_back(std::move(spec));
    }
  }
  if (j.contains("collaborativeTasks")) {
    for (const json& t : j["collaborativeTasks"]) {
      CollaborativeTaskSpec spec;
      spec.name = as<std::string>(field(t, "name", "collaborative task"), "collaborative task");
      const std::string where = "task '" + spec.name + "'";
      spec.region = as<std::string>(field(t, "region", where), where);
      spec.requirements = as<std::map<std::string, int>>(field(t, "requirements", where), where);
      sc.collaborativeTasks.push_back(std::move(spec));
    }
  }
  sc.formula = optional<std::string>(j, "formula", "true", "scenario");
  sc.options = readOptions(j.contains("options") ? j["options"] : json());
  return sc;
}

Scenario loadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parseScenario(ss.str());
}

std::string dumpScenario(const Scenario& sc) {
  json j;
  j["schemaVersion"] = 1;
  json world;
  if (sc.world.grid) {
    world["grid"] = {{"width", sc.world.grid->width}, {"height", sc.world.grid->height},
                     {"weight", sc.world.grid->weight}};
  } else {
    world["regions"] = sc.world.regions;
    json edges = json::array();
    for (const auto& [a, b, w] : sc.world.edges) edges.push_back({a, b, w});
    world["edges"] = edges;
  }
  j["world"] = world;

  json robots = json::array();
  for (const auto& r : sc.robots)
    robots.push_back({{"name", r.name}, {"capabilities", r.capabilities}, {"start", r.start}, {"formula", r.formula}});
  j["fleet"] = {{"capabilities", sc.capabilities}, {"robots", robots}};

  json individual = json::array();
  for (const auto& t : sc.individualTasks)
    individual.push_back({{"name", t.name}, {"region", t.region}, {"owner", t.owner}, {"capability", t.capability}});
  j["individualTasks"] = individual;

  json collaborative = json::array();
  for (const auto& t : sc.collaborativeTasks)
    collaborative.push_back({{"name", t.name}, {"region", t.region}, {"requirements", t.requirements}});
  j["collaborativeTasks"] = collaborative;

  j["formula"] = sc.formula;
  j["options"] = writeOptions(sc.options);
  return j.dump(2) + "\n";
}

void saveScenario(const Scenario& sc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << dumpScenario(sc);
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

Instance compile(const Scenario& sc) {
  Instance in;
  if (sc.world.grid) {
    in.world = World::grid(sc.world.grid->width, sc.world.grid->height, sc.world.grid->weight);
  } else {
    for (const auto& name : sc.world.regions) in.world.addRegion(name);
    for (const auto& [a, b, w] : sc.world.edges) {
      auto qa = in.world.findRegion(a);
      auto qb = in.world.findRegion(b);
      if (!qa || !qb) invalid("edge " + a + "-" + b + " references an unknown region");
      in.world.addEdge(*qa, *qb, w);
    }
  }
  in.world.validate();

  auto region = [&](const std::string& name, const std::string& where) {
    auto q = in.world.findRegion(name);
    if (!q) invalid(where + ": unknown region '" + name + "'");
    return *q;
  };
  auto capability = [&](const std::string& name, const std::string& where) {
    auto c = in.fleet.findCapability(name);
    if (!c) invalid(where + ": unknown capability '" + name + "'");
    return *c;
  };

  for (const auto& c : sc.capabilities) {
    if (in.fleet.findCapability(c)) invalid("duplicate capability '" + c + "'");
    in.fleet.addCapability(c);
  }
  if (sc.robots.empty()) invalid("fleet has no robots");
  for (const auto& r : sc.robots) {
    const std::string where = "robot '" + r.name + "'";
    if (in.fleet.findRobot(r.name)) invalid("duplicate robot '" + r.name + "'");
    Robot robot;
    robot.name = r.name;
    for (const auto& c : r.capabilities) robot.caps.push_back(capability(c, where));
    std::sort(robot.caps.begin(), robot.caps.end());
    robot.caps.erase(std::unique(robot.caps.begin(), robot.caps.end()), robot.caps.end());
    robot.start = region(r.start, where);
    in.fleet.addRobot(std::move(robot));
  }

  std::set<std::string> names;
  auto claim = [&](const std::string& name) {
    if (name.empty()) invalid("task with an empty name");
    if (!names.insert(name).second) invalid("duplicate task '" + name + "'");
  };
  for (const auto& t : sc.individualTasks) {
    claim(t.name);
    const std::string where = "task '" + t.name + "'";
    TaskReq req;
    req.prop = in.props.intern(t.name);
    req.region = region(t.region, where);
    auto owner = in.fleet.findRobot(t.owner);
    if (!owner) invalid(where + ": unknown owner '" + t.owner + "'");
    req.owner = *owner;
    req.requirements[capability(t.capability, where)] = 1;
    in.tasks.push_back(std::move(req));
  }
  for (const auto& t : sc.collaborativeTasks) {
    claim(t.name);
    const std::string where = "task '" + t.name + "'";
    TaskReq req;
    req.prop = in.props.intern(t.name);
    req.region = region(t.region, where);
    for (const auto& [c, n] : t.requirements) req.requirements[capability(c, where)] = n;
    in.collaborative.insert(req.prop);
    in.tasks.push_back(std::move(req));
  }
  validateTasks(in.world, in.fleet, in.tasks);

  for (std::size_t r = 0; r < sc.robots.size(); ++r) {
    Formula f = parse(sc.robots[r].formula, in.props);
    for (PropId p : f.props()) {
      auto it = std::find_if(in.tasks.begin(), in.tasks.end(), [&](const TaskReq& t) { return t.prop == p; });
      if (it == in.tasks.end() || it->collaborative() || it->owner != RobotId(r))
        invalid("formula of robot '" + sc.robots[r].name + "' mentions '" + in.props.name(p) +
                "', which is not one of its individual tasks");
    }
    in.robotFormulas.push_back(f);
  }
  in.global = parse(sc.formula, in.props);
  for (PropId p : in.global.props())
    if (!in.collaborative.contains(p))
      invalid("collaborative formula mentions '" + in.props.name(p) + "', which is not a collaborative task");

  if (sc.options.budgetSeconds <= 0) invalid("options.budgetSeconds must be positive");
  Topology::parseKind(sc.options.topology);
  return in;
}

std::string collaborativeTemplate(const std::string& name, std::size_t k) {
  auto ct = [](std::size_t i) { return "ct" + std::to_string(i); };
  if (k == 0) return "true";
  std::string out;
  if (name == "conj") {
    for (std::size_t i = 1; i <= k; ++i) out += (i > 1 ? " & " : "") + ("F " + ct(i));
  } else if (name == "chain") {
    out = ct(k);
    for (std::size_t i = k - 1; i >= 1; --i) out = ct(i) + " & F (" + out + ")";
    out = "F (" + out + ")";
  } else if (name == "example") {
    if (k != 4) invalid("template 'example' needs exactly 4 collaborative tasks");
    out = "F ct1 & F ct2 & F ct4 & (!ct3 U ct2) & F (ct4 & F ct3)";
  } else if (name == "mixed") {
    // ordered pairs, plus an ordering constraint across the first two pairs
    for (std::size_t i = 1; i <= k; i += 2) {
      if (!out.empty()) out += " & ";
      out += i + 1 <= k ? "F (" + ct(i) + " & F " + ct(i + 1) + ")" : "F " + ct(i);
    }
    if (k >= 3) out += " & (!" + ct(3) + " U " + ct(1) + ")";
  } else {
    invalid("unknown formula template '" + name + "'");
  }
  return out;
}

Scenario generate(const GeneratorParams& p) {
  if (p.robots == 0) invalid("generator needs at least one robot");
  if (p.width <= 0 || p.height <= 0) invalid("grid dimensions must be positive");
  if (p.capabilities == 0 || p.capabilities > 3) invalid("capability count must be in 1..3");
  if (p.maxRequirement <= 0) invalid("maxRequirement must be positive");
  const std::size_t cells = static_cast<std::size_t>(p.width) * static_cast<std::size_t>(p.height);
  const std::size_t needed = p.robots * p.individualPerRobot + p.collab;
  if (needed > cells)
    invalid(std::to_string(needed) + " tasks do not fit on " + std::to_string(cells) + " cells");

  std::mt19937_64 rng(p.seed);
  auto below = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto chance = [&](double q) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < q; };

  Scenario sc;
  sc.world.grid = GridSpec{p.width, p.height, 1};
  for (std::size_t c = 1; c <= p.capabilities; ++c) sc.capabilities.push_back("c" + std::to_string(c));

  std::vector<std::size_t> order(cells);
  for (std::size_t i = 0; i < cells; ++i) order[i] = i;
  for (std::size_t i = cells; i > 1; --i) std::swap(order[i - 1], order[below(i)]);
  std::size_t next = 0;
  auto cell = [](std::size_t i) { return "q" + std::to_string(i); };

  std::vector<std::set<std::size_t>> holders(p.capabilities);
  for (std::size_t r = 0; r < p.robots; ++r) {
    RobotSpec robot;
    robot.name = "r" + std::to_string(r + 1);
    std::size_t first = r < p.capabilities ? r : below(p.capabilities);
    std::set<std::size_t> caps{first};
    if (p.capabilities > 1 && chance(p.secondCapability)) caps.insert((first + 1 + below(p.capabilities - 1)) % p.capabilities);
    for (std::size_t c : caps) {
      robot.capabilities.push_back(sc.capabilities[c]);
      holders[c].insert(r);
    }
    robot.start = cell(below(cells));

    std::vector<std::string> own;
    for (std::size_t i = 1; i <= p.individualPerRobot; ++i) {
      IndividualTaskSpec t;
      t.name = "ts" + std::to_string(r + 1) + "_" + std::to_string(i);
      t.region = cell(order[next++]);
      t.owner = robot.name;
      t.capability = robot.capabilities.front();
      own.push_back(t.name);
      sc.individualTasks.push_back(std::move(t));
    }
    if (!own.empty()) {
      robot.formula.clear();
      for (std::size_t i = 0; i < own.size(); ++i) robot.formula += (i ? " & F " : "F ") + own[i];
      if (own.size() >= 2) robot.formula += " & (!" + own.front() + " U " + own.back() + ")";
    }
    sc.robots.push_back(std::move(robot));
  }

  std::vector<std::size_t> present;
  for (std::size_t c = 0; c < p.capabilities; ++c)
    if (!holders[c].empty()) present.push_back(c);
  for (std::size_t i = 1; i <= p.collab; ++i) {
    CollaborativeTaskSpec t;
    t.name = "ct" + std::to_string(i);
    t.region = cell(order[next++]);
    std::size_t kinds = std::min<std::size_t>(present.size(), 1 + below(2));
    std::vector<std::size_t> pool = present;
    for (std::size_t n = 0; n < kinds; ++n) {
      std::size_t pick = below(pool.size());
      std::size_t c = pool[pick];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
      // never ask for more robots than hold the capability
      int cap = static_cast<int>(std::min<std::size_t>(holders[c].size(), static_cast<std::size_t>(p.maxRequirement)));
      t.requirements[sc.capabilities[c]] = 1 + static_cast<int>(below(static_cast<std::size_t>(cap)));
    }
    sc.collaborativeTasks.push_back(std::move(t));
  }
  sc.formula = collaborativeTemplate(p.templateName, p.collab);
  sc.options.seed = p.seed;
  return sc;
}

}  // namespace colplan
