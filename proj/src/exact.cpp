#include "colplan/exact.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "colplan/error.hpp"

namespace colplan {

std::size_t LinearModel::addVariable(std::string name, bool binary) {
  vars_.push_back(Variable{std::move(name), binary});
  return vars_.size() - 1;
}

std::optional<std::size_t> LinearModel::find(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return i;
  return std::nullopt;
}

std::vector<LinearTerm> LinearModel::canonical(std::vector<LinearTerm> terms) {
  std::map<std::size_t, double> merged;
  for (const auto& t : terms) merged[t.var] += t.coef;
  std::vector<LinearTerm> out;
  for (const auto& [v, c] : merged)
    if (c != 0) out.push_back(LinearTerm{v, c});
  return out;
}

void LinearModel::addConstraint(std::string name, std::vector<LinearTerm> terms, Sense sense, double rhs) {
  rows_.push_back(LinearConstraint{std::move(name), canonical(std::move(terms)), sense, rhs});
}

void LinearModel::setObjective(std::vector<LinearTerm> terms) { objective_ = canonical(std::move(terms)); }

double LinearModel::objectiveValue(const std::vector<double>& values) const {
  double v = 0;
  for (const auto& t : objective_) v += t.coef * values.at(t.var);
  return v;
}

std::optional<std::string> LinearModel::violated(const std::vector<double>& values, double tol) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (values.at(i) < -tol) return vars_[i].name + " >= 0";
    if (vars_[i].binary && std::abs(values[i]) > tol && std::abs(values[i] - 1) > tol) return vars_[i].name + " binary";
  }
  for (const auto& row : rows_) {
    double lhs = 0;
    for (const auto& t : row.terms) lhs += t.coef * values.at(t.var);
    bool ok = row.sense == Sense::Le ? lhs <= row.rhs + tol
              : row.sense == Sense::Ge ? lhs >= row.rhs - tol
                                       : std::abs(lhs - row.rhs) <= tol;
    if (!ok) return row.name;
  }
  return std::nullopt;
}

namespace {

std::string occName(const Occurrence& o) { return std::to_string(o.k) + "_" + std::to_string(o.l); }

}  // namespace

MilpModel buildMilp(const std::vector<RobotPlan>& plans, const Mission& mission, const Assignment& a) {
  MilpModel m;
  auto& lp = m.lp;
  const std::size_t n = plans.size();
  m.bigM.resize(n);
  m.edge.resize(n);
  m.arrival.resize(n);
  m.delay.resize(n);
  m.end.resize(n);
  std::vector<LinearTerm> objective;

  for (std::size_t r = 0; r < n; ++r) {
    const auto& plan = plans[r];
    const auto& pruned = plan.pruned;
    const std::string rs = std::to_string(r);
    const Duration M = pruned.totalWeight();
    m.bigM[r] = M;
    lp.comments.push_back("big-M robot " + rs + " = " + formatDuration(M));

    const std::size_t levels = pruned.levelCount();
    std::vector<std::size_t> offset(levels, 0);
    for (std::size_t l = 1; l < levels; ++l) offset[l] = offset[l - 1] + pruned.levels[l - 1].size();

    m.edge[r].resize(levels - 1);
    std::vector<std::vector<LinearTerm>> in(offset.back() + pruned.levels.back().size());
    std::vector<std::vector<LinearTerm>> out(in.size());
    for (std::size_t l = 0; l + 1 < levels; ++l) {
      for (const auto& e : pruned.edges[l]) {
        std::size_t i = offset[l] + e.from;
        std::size_t j = offset[l + 1] + e.to;
        auto v = lp.addVariable("y_" + rs + "_" + std::to_string(i) + "_" + std::to_string(j), true);
        m.edge[r][l].push_back(v);
        out[i].push_back({v, 1});
        in[j].push_back({v, 1});
      }
    }
    for (std::size_t i = 0; i < plan.occurrences.size(); ++i) {
      const auto name = rs + "_" + occName(mission.occurrences[plan.occurrences[i]]);
      m.arrival[r].push_back(lp.addVariable("t_" + name));
      m.delay[r].push_back(lp.addVariable("d_" + name));
    }
    m.end[r] = lp.addVariable("t_" + rs + "_end");

    // (3) leave the initial level once, (4) enter the accepting level once.
    std::vector<LinearTerm> start;
    for (std::size_t i = 0; i < pruned.levels[0].size(); ++i) start.insert(start.end(), out[i].begin(), out[i].end());
    lp.addConstraint("start_" + rs, start, Sense::Eq, 1);
    std::vector<LinearTerm> finish;
    for (std::size_t i = offset.back(); i < in.size(); ++i) finish.insert(finish.end(), in[i].begin(), in[i].end());
    lp.addConstraint("finish_" + rs, finish, Sense::Eq, 1);
    // (2) conservation with unit capacity at every intermediate state.
    for (std::size_t l = 1; l + 1 < levels; ++l) {
      for (std::size_t s = 0; s < pruned.levels[l].size(); ++s) {
        std::size_t i = offset[l] + s;
        auto terms = in[i];
        for (const auto& t : out[i]) terms.push_back({t.var, -1});
        const auto id = rs + "_" + std::to_string(i);
        lp.addConstraint("flow_" + id, terms, Sense::Eq, 0);
        lp.addConstraint("cap_" + id, in[i], Sense::Le, 1);
      }
    }
    // (5) t_l = t_{l-1} + w(e) when edge e into level l is selected.
    for (std::size_t l = 0; l + 1 < levels; ++l) {
      std::size_t target = l < plan.occurrences.size() ? m.arrival[r][l] : m.end[r];
      std::optional<std::size_t> prev;
      if (l > 0) prev = m.arrival[r][l - 1];
      for (std::size_t k = 0; k < pruned.edges[l].size(); ++k) {
        const auto& e = pruned.edges[l][k];
        std::size_t y = m.edge[r][l][k];
        std::vector<LinearTerm> base{{target, 1}};
        if (prev) base.push_back({*prev, -1});
        auto upper = base;
        upper.push_back({y, M});
        auto lower = base;
        lower.push_back({y, -M});
        const auto id = lp.variables()[y].name.substr(2);
        lp.addConstraint("tu_" + id, upper, Sense::Le, M + e.weight);
        lp.addConstraint("tl_" + id, lower, Sense::Ge, e.weight - M);
      }
    }
    objective.push_back({m.end[r], 1});
    if (!plan.occurrences.empty()) objective.push_back({m.delay[r].back(), 1});
  }

  m.latest.resize(mission.occurrences.size());
  for (std::size_t o = 0; o < mission.occurrences.size(); ++o)
    m.latest[o] = lp.addVariable("z_" + occName(mission.occurrences[o]));

  auto position = [&](std::size_t r, std::size_t occ) -> std::size_t {
    const auto& v = plans[r].occurrences;
    auto it = std::find(v.begin(), v.end(), occ);
    if (it == v.end()) throw Error(ErrorCode::InvalidTask, "assignment and robot plans disagree");
    return static_cast<std::size_t>(it - v.begin());
  };
  for (std::size_t o = 0; o < mission.occurrences.size(); ++o) {
    const auto on = occName(mission.occurrences[o]);
    for (auto robot : a.robotsOf(o)) {
      std::size_t r = robot.index();
      std::size_t i = position(r, o);
      const auto id = std::to_string(r) + "_" + on;
      // (6) z ≥ t + d_prev and d = z − t.
      std::vector<LinearTerm> lb{{m.latest[o], 1}, {m.arrival[r][i], -1}};
      if (i > 0) lb.push_back({m.delay[r][i - 1], -1});
      lp.addConstraint("late_" + id, lb, Sense::Ge, 0);
      lp.addConstraint("wait_" + id, {{m.delay[r][i], 1}, {m.latest[o], -1}, {m.arrival[r][i], 1}}, Sense::Eq, 0);
    }
  }
  for (std::size_t e = 0; e < mission.elements.size(); ++e) {
    const auto& el = mission.elements[e];
    const std::size_t head = el.occurrences.front();
    for (std::size_t i = 1; i < el.occurrences.size(); ++i)
      lp.addConstraint("sync_" + occName(mission.occurrences[el.occurrences[i]]),
                       {{m.latest[el.occurrences[i]], 1}, {m.latest[head], -1}}, Sense::Eq, 0);
    if (auto prev = mission.previousElement(e))
      lp.addConstraint("order_" + occName(mission.occurrences[head]),
                       {{m.latest[head], 1}, {m.latest[mission.elements[*prev].occurrences.front()], -1}}, Sense::Ge, 0);
  }
  lp.setObjective(objective);
  return m;
}

Timeline optionTimeline(const RobotPlan& plan, const RobotOption& option) {
  Timeline tl;
  tl.robot = plan.robot;
  tl.occurrences = plan.occurrences;
  Duration t = 0;
  for (std::size_t i = 0; i < option.legs.size(); ++i) {
    t += option.legs[i];
    if (i < plan.occurrences.size()) tl.arrival.push_back(t);
  }
  tl.completion = t;
  return tl;
}

std::vector<double> milpValuation(const MilpModel& m, const std::vector<RobotPlan>& plans, const Mission& mission,
                                  const Assignment& a, const std::vector<std::vector<std::size_t>>& choices) {
  std::vector<double> x(m.lp.variables().size(), 0);
  std::vector<Timeline> timelines;
  for (std::size_t r = 0; r < plans.size(); ++r) {
    const auto& lp = plans[r].pruned;
    RobotOption opt{choices.at(r), {}};
    for (std::size_t l = 0; l + 1 < opt.choice.size(); ++l) {
      for (std::size_t k = 0; k < lp.edges[l].size(); ++k) {
        const auto& e = lp.edges[l][k];
        if (e.from == opt.choice[l] && e.to == opt.choice[l + 1]) {
          x[m.edge[r][l][k]] = 1;
          opt.legs.push_back(e.weight);
        }
      }
    }
    timelines.push_back(optionTimeline(plans[r], opt));
  }
  auto cost = computeTimeCost(timelines, mission, a);
  for (std::size_t r = 0; r < plans.size(); ++r) {
    for (std::size_t i = 0; i < plans[r].occurrences.size(); ++i) {
      x[m.arrival[r][i]] = timelines[r].arrival[i];
      x[m.delay[r][i]] = cost.occurrenceTime[plans[r].occurrences[i]] - timelines[r].arrival[i];
    }
    x[m.end[r]] = timelines[r].completion;
  }
  for (std::size_t o = 0; o < m.latest.size(); ++o) x[m.latest[o]] = cost.occurrenceTime[o];
  return x;
}

std::vector<RobotOption> robotOptions(const PrunedPa& lp, bool pareto, std::size_t cap) {
  std::vector<RobotOption> all;
  const std::size_t levels = lp.levelCount();
  std::vector<std::vector<std::vector<const PrunedEdge*>>> outgoing(levels);
  for (std::size_t l = 0; l + 1 < levels; ++l) {
    outgoing[l].resize(lp.levels[l].size());
    for (const auto& e : lp.edges[l]) outgoing[l][e.from].push_back(&e);
  }
  RobotOption cur;
  auto dfs = [&](auto&& self, std::size_t level) -> void {
    if (level + 1 == levels) {
      if (all.size() >= cap) throw Error(ErrorCode::BudgetExceeded, "too many level choices for one robot");
      all.push_back(cur);
      return;
    }
    for (const auto* e : outgoing[level][cur.choice.back()]) {
      cur.choice.push_back(e->to);
      cur.legs.push_back(e->weight);
      self(self, level + 1);
      cur.choice.pop_back();
      cur.legs.pop_back();
    }
  };
  for (std::size_t s = 0; s < lp.levels[0].size(); ++s) {
    cur.choice = {s};
    cur.legs.clear();
    dfs(dfs, 0);
  }
  if (!pareto) return all;

  // Cheapest first, so every dominating vector precedes what it dominates.
  std::stable_sort(all.begin(), all.end(), [](const RobotOption& x, const RobotOption& y) {
    Duration sx = 0, sy = 0;
    for (auto v : x.legs) sx += v;
    for (auto v : y.legs) sy += v;
    if (sx != sy) return sx < sy;
    return x.legs < y.legs;
  });
  std::vector<RobotOption> front;
  for (auto& o : all) {
    bool dominated = std::any_of(front.begin(), front.end(), [&](const RobotOption& f) {
      for (std::size_t i = 0; i < f.legs.size(); ++i)
        if (f.legs[i] > o.legs[i]) return false;
      return true;
    });
    if (!dominated) front.push_back(std::move(o));
  }
  return front;
}

ExactResult solveExact(const std::vector<RobotPlan>& plans, const Mission& mission, const Assignment& a,
                       const ExactOptions& options) {
  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - started).count(); };

  const std::size_t n = plans.size();
  std::vector<std::vector<RobotOption>> options_(n);
  std::vector<std::vector<Timeline>> timelines(n);
  std::vector<Duration> minCompletion(n, 0);
  double combos = 1;
  for (std::size_t r = 0; r < n; ++r) {
    options_[r] = robotOptions(plans[r].pruned, options.pareto, options.combinationCap);
    if (options_[r].empty()) throw Error(ErrorCode::LevelDisconnected, "robot without an accepting level path");
    for (const auto& o : options_[r]) timelines[r].push_back(optionTimeline(plans[r], o));
    std::vector<std::size_t> order(options_[r].size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    // Cheapest completion first; the bound then prunes early.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return timelines[r][x].completion < timelines[r][y].completion;
    });
    std::vector<RobotOption> o2;
    std::vector<Timeline> t2;
    for (auto i : order) {
      o2.push_back(options_[r][i]);
      t2.push_back(timelines[r][i]);
    }
    options_[r] = std::move(o2);
    timelines[r] = std::move(t2);
    minCompletion[r] = timelines[r].front().completion;
    combos *= static_cast<double>(options_[r].size());
  }
  if (combos > static_cast<double>(options.combinationCap))
    throw Error(ErrorCode::BudgetExceeded, "search space of " + formatDuration(combos) + " combinations exceeds the cap");

  ExactResult res;
  res.combinations = static_cast<std::size_t>(combos);
  std::vector<Duration> suffixMin(n + 1, 0);
  for (std::size_t r = n; r-- > 0;) suffixMin[r] = suffixMin[r + 1] + minCompletion[r];

  std::vector<std::size_t> pick(n, 0), bestPick;
  std::vector<Timeline> current(n);
  std::size_t nodes = 0;
  auto search = [&](auto&& self, std::size_t r, Duration partial) -> void {
    if (++nodes % 1024 == 0 && elapsed() > options.timeBudgetSeconds)
      throw Error(ErrorCode::BudgetExceeded, "time budget exhausted");
    if (r == n) {
      ++res.evaluated;
      auto cost = computeTimeCost(current, mission, a);
      if (cost.total < res.J) {
        res.J = cost.total;
        res.cost = cost;
        bestPick = pick;
      }
      return;
    }
    for (std::size_t i = 0; i < options_[r].size(); ++i) {
      Duration bound = partial + timelines[r][i].completion + suffixMin[r + 1];
      if (bound >= res.J) break;  // options sorted by completion
      pick[r] = i;
      current[r] = timelines[r][i];
      self(self, r + 1, partial + timelines[r][i].completion);
    }
  };
  search(search, 0, 0);

  for (std::size_t r = 0; r < n; ++r) {
    const auto& opt = options_[r][bestPick[r]];
    res.choices.push_back(opt.choice);
    res.strategies.push_back(makeStrategy(plans[r].product, expandPath(plans[r].pruned, opt.choice), plans[r].tasks));
  }
  res.seconds = elapsed();
  return res;
}

namespace {

std::string number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void writeTerms(std::ostream& os, const LinearModel& m, const std::vector<LinearTerm>& terms) {
  if (terms.empty()) {
    os << " 0";
    return;
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i > 0 && i % 8 == 0) os << "\n   ";
    double c = terms[i].coef;
    os << ' ' << (c < 0 ? "-" : (i == 0 ? "" : "+"));
    if (i > 0 || c < 0) os << ' ';
    if (std::abs(c) != 1) os << number(std::abs(c)) << ' ';
    os << m.variables()[terms[i].var].name;
  }
}

}  // namespace

void writeLp(const LinearModel& m, std::ostream& os) {
  os << "\\ colplan exact model\n";
  for (const auto& c : m.comments) os << "\\ " << c << '\n';
  os << "Minimize\n obj:";
  writeTerms(os, m, m.objective());
  os << "\nSubject To\n";
  for (const auto& row : m.constraints()) {
    os << ' ' << row.name << ':';
    writeTerms(os, m, row.terms);
    os << ' ' << (row.sense == Sense::Le ? "<=" : row.sense == Sense::Ge ? ">=" : "=") << ' ' << number(row.rhs)
       << '\n';
  }
  os << "Bounds\n";
  for (const auto& v : m.variables())
    if (!v.binary) os << ' ' << v.name << " >= 0\n";
  os << "Binaries\n";
  for (const auto& v : m.variables())
    if (v.binary) os << ' ' << v.name << '\n';
  os << "End\n";
}

void emitLp(const LinearModel& m, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::Io, "cannot open " + path);
  writeLp(m, f);
  if (!f) throw Error(ErrorCode::Io, "failed writing " + path);
}

namespace {

struct Tok {
  std::string text;
  std::size_t offset;
};

std::vector<Tok> tokenize(std::istream& is) {
  std::string data((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  std::vector<Tok> toks;
  std::size_t i = 0;
  while (i < data.size()) {
    char c = data[i];
    if (c == '\\') {
      while (i < data.size() && data[i] != '\n') ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (c == '<' || c == '>' || c == '=') {
      ++i;
      if (i < data.size() && data[i] == '=') ++i;
    } else if (c == '+' || c == '-' || c == ':') {
      ++i;
    } else {
      while (i < data.size() && !std::isspace(static_cast<unsigned char>(data[i])) && data[i] != ':' &&
             data[i] != '<' && data[i] != '>' && data[i] != '=')
        ++i;
    }
    toks.push_back({data.substr(start, i - start), start});
  }
  return toks;
}

bool isNumber(const std::string& s, double& v) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

LinearModel parseLp(std::istream& is) {
  auto toks = tokenize(is);
  std::size_t p = 0;
  auto fail = [&](const std::string& what) -> void {
    std::size_t off = p < toks.size() ? toks[p].offset : (toks.empty() ? 0 : toks.back().offset);
    throw SyntaxError(ErrorCode::SyntaxError, off, what);
  };
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
  };
  auto at = [&](const std::string& word) { return p < toks.size() && lower(toks[p].text) == word; };
  auto expect = [&](const std::string& word) {
    if (!at(word)) fail("expected '" + word + "'");
    ++p;
  };

  LinearModel m;
  std::map<std::string, std::size_t> index;
  std::vector<std::string> order;
  struct Row {
    std::string name;
    std::vector<std::pair<std::string, double>> terms;
    Sense sense;
    double rhs;
  };
  std::vector<Row> rows;
  std::vector<std::pair<std::string, double>> objective;
  std::vector<std::string> binaries;
  auto note = [&](const std::string& v) {
    if (!index.count(v)) {
      index[v] = order.size();
      order.push_back(v);
    }
  };
  auto isKeyword = [&](std::size_t i) {
    if (i >= toks.size()) return true;
    auto w = lower(toks[i].text);
    return w == "subject" || w == "bounds" || w == "binaries" || w == "end" || w == "general" || w == "generals";
  };
  // Terms until a sense operator or the next section.
  auto expression = [&](std::vector<std::pair<std::string, double>>& out) {
    while (p < toks.size() && !isKeyword(p)) {
      const auto& t = toks[p].text;
      if (t == "<=" || t == ">=" || t == "=" || t == "<" || t == ">") return;
      if (p + 1 < toks.size() && toks[p + 1].text == ":") return;
      double sign = 1;
      if (t == "+" || t == "-") {
        sign = t == "-" ? -1 : 1;
        ++p;
      }
      if (p >= toks.size()) fail("dangling sign");
      double coef = 1;
      double v;
      if (isNumber(toks[p].text, v)) {
        coef = v;
        ++p;
        if (p >= toks.size() || isKeyword(p) || toks[p].text == "+" || toks[p].text == "-" ||
            toks[p].text.find_first_of("<>=") == 0) {
          if (v != 0) fail("constant terms are not supported");
          continue;
        }
      }
      const auto& name = toks[p].text;
      note(name);
      out.emplace_back(name, sign * coef);
      ++p;
    }
  };

  expect("minimize");
  if (p + 1 < toks.size() && toks[p + 1].text == ":") p += 2;
  expression(objective);
  expect("subject");
  expect("to");
  while (p < toks.size() && !isKeyword(p)) {
    Row row;
    row.name = toks[p].text;
    ++p;
    expect(":");
    expression(row.terms);
    if (p >= toks.size()) fail("missing sense");
    auto s = toks[p].text;
    if (s == "<=" || s == "<") row.sense = Sense::Le;
    else if (s == ">=" || s == ">") row.sense = Sense::Ge;
    else if (s == "=") row.sense = Sense::Eq;
    else fail("expected a sense operator");
    ++p;
    double sign = 1;
    if (p < toks.size() && (toks[p].text == "-" || toks[p].text == "+")) {
      sign = toks[p].text == "-" ? -1 : 1;
      ++p;
    }
    double v;
    if (p >= toks.size() || !isNumber(toks[p].text, v)) fail("expected a right-hand side");
    row.rhs = sign * v;
    ++p;
    rows.push_back(std::move(row));
  }
  if (at("bounds")) {
    ++p;
    while (p < toks.size() && !isKeyword(p)) {
      note(toks[p].text);
      ++p;
      if (p + 1 >= toks.size() || toks[p].text != ">=" || toks[p + 1].text != "0") fail("only 'x >= 0' bounds are supported");
      p += 2;
    }
  }
  if (at("binaries")) {
    ++p;
    while (p < toks.size() && !isKeyword(p)) {
      note(toks[p].text);
      binaries.push_back(toks[p].text);
      ++p;
    }
  }
  expect("end");

  std::vector<bool> binary(order.size(), false);
  for (const auto& b : binaries) binary[index[b]] = true;
  std::map<std::string, std::size_t> finalIndex;
  for (const auto& name : order) finalIndex[name] = m.addVariable(name, binary[index[name]]);
  auto convert = [&](const std::vector<std::pair<std::string, double>>& terms) {
    std::vector<LinearTerm> out;
    for (const auto& [name, c] : terms) out.push_back({finalIndex[name], c});
    return out;
  };
  m.setObjective(convert(objective));
  for (const auto& row : rows) m.addConstraint(row.name, convert(row.terms), row.sense, row.rhs);
  return m;
}

}  // namespace colplan

namespace colplan {

bool equivalent(const LinearModel& a, const LinearModel& b) {
  if (a.variables().size() != b.variables().size() || a.constraints().size() != b.constraints().size()) return false;
  using Named = std::map<std::string, double>;
  auto named = [](const LinearModel& m, const std::vector<LinearTerm>& terms) {
    Named out;
    for (const auto& t : terms) out[m.variables()[t.var].name] = t.coef;
    return out;
  };
  std::map<std::string, bool> va, vb;
  for (const auto& v : a.variables()) va[v.name] = v.binary;
  for (const auto& v : b.variables()) vb[v.name] = v.binary;
  if (va != vb || named(a, a.objective()) != named(b, b.objective())) return false;
  for (std::size_t i = 0; i < a.constraints().size(); ++i) {
    const auto& x = a.constraints()[i];
    const auto& y = b.constraints()[i];
    if (x.name != y.name || x.sense != y.sense || x.rhs != y.rhs || named(a, x.terms) != named(b, y.terms)) return false;
  }
  return true;
}

}  // namespace colplan
