#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "colplan/error.hpp"
#include "colplan/framework.hpp"

namespace colplan {

using nlohmann::json;

const std::vector<std::string> kMetricsColumns = {
    "assignment", "filtered", "feasible",     "T_init",         "T_adjusted", "T_indiv",
    "J",          "cycles",   "adjustments",  "messages",       "bound_reached", "product_states",
    "delta",      "pruned_edges", "prune_s",  "adj_s",          "ip_s",       "note",
};

namespace {

std::string opt(const std::optional<Duration>& d) { return d ? formatDuration(*d) : std::string(); }

std::string seconds(double s) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << s;
  return os.str();
}

std::string csvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void writeFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

std::string joinLines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

json names(const PropSet& s, const PropTable& props) {
  json out = json::array();
  for (PropId p : s) out.push_back(props.name(p));
  return out;
}

}  // namespace

std::string metricsCsv(const RunReport& rr) {
  std::ostringstream os;
  for (std::size_t i = 0; i < kMetricsColumns.size(); ++i) os << (i ? "," : "") << kMetricsColumns[i];
  os << "\n";
  for (const auto& r : rr.rows) {
    os << r.id << ',' << (r.filtered ? 1 : 0) << ',' << (r.feasible ? 1 : 0) << ',' << opt(r.tInit) << ','
       << opt(r.tAdjusted) << ',' << opt(r.individual) << ',' << opt(r.J) << ',' << r.cycles << ','
       << r.adjustments << ',' << r.messages << ',' << (r.boundReached ? 1 : 0) << ',' << r.productStates << ','
       << r.delta << ',' << r.prunedEdges << ',' << seconds(r.prune_s) << ',' << seconds(r.adj_s) << ','
       << seconds(r.ip_s) << ',' << csvField(r.note) << "\n";
  }
  return os.str();
}

std::string seriesCsv(const RunReport& rr) {
  std::ostringstream os;
  os << "assignment,iteration,T_colla\n";
  for (const auto& r : rr.rows)
    for (std::size_t i = 0; i < r.series.size(); ++i) os << r.id << ',' << i << ',' << formatDuration(r.series[i]) << "\n";
  return os.str();
}

std::string scheduleJson(const RunReport& rr, const Instance& in) {
  json j;
  j["schemaVersion"] = 1;
  j["stopReason"] = rr.stopReason;
  j["assignments"] = rr.rows.size();

  json elements = json::array();
  for (std::size_t e = 0; e < rr.mission.elements.size(); ++e) {
    const Element& el = rr.mission.elements[e];
    json item{{"k", el.k}, {"m", el.m}, {"tasks", names(el.tasks, in.props)}};
    if (rr.best) item["time"] = rr.best->cost.elementTime.at(e);
    elements.push_back(std::move(item));
  }
  j["mission"] = {{"subsequences", rr.mission.subsequenceCount}, {"elements", elements}};

  if (!rr.best) {
    j["best"] = nullptr;
    return j.dump(2) + "\n";
  }
  const Solution& s = *rr.best;
  const AssignmentRow& row = rr.rows.at(s.row);
  json best;
  best["assignment"] = row.id;
  best["T_colla"] = s.cost.total;
  best["T_indiv"] = s.cost.individual;
  best["T_init"] = row.tInit ? json(*row.tInit) : json(nullptr);
  best["J"] = row.J ? json(*row.J) : json(nullptr);
  json robots = json::array();
  for (const auto& p : s.plans) {
    const std::size_t r = p.robot.index();
    json walk = json::array();
    for (RegionId q : p.strategy.walk) walk.push_back(in.world.regionName(q));
    json tasks = json::array();
    for (std::size_t i = 0; i < p.occurrences.size(); ++i) {
      std::size_t o = p.occurrences[i];
      const Occurrence& occ = rr.mission.occurrences[o];
      tasks.push_back({{"task", in.props.name(occ.task)},
                       {"k", occ.k},
                       {"l", occ.l},
                       {"position", p.strategy.collabIndices.at(i)},
                       {"arrival", p.timeline.arrival.at(i)},
                       {"time", s.cost.occurrenceTime.at(o)}});
    }
    robots.push_back({{"name", in.fleet.robot(p.robot).name},
                      {"walk", walk},
                      {"tasks", tasks},
                      {"T_r", p.timeline.completion},
                      {"delay", s.cost.delay.at(r)},
                      {"T_colla_r", s.cost.robotTotal.at(r)}});
  }
  best["robots"] = robots;
  j["best"] = best;
  return j.dump(2) + "\n";
}

void writeReport(const RunReport& rr, const Instance& in, const std::string& dir) {
  std::filesystem::path root(dir);
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir + ": " + ec.message());
  writeFile(root / "metrics.csv", metricsCsv(rr));
  writeFile(root / "schedule.json", scheduleJson(rr, in));
  writeFile(root / "tcolla_series.csv", seriesCsv(rr));
  writeFile(root / "protocol_trace.txt", rr.best ? joinLines(rr.best->protocolTrace) : std::string());
  writeFile(root / "execution_trace.txt",
            rr.best ? joinLines(formatEvents(rr.best->execution.events, in.world, in.fleet, in.props)) : std::string());
}

}  // namespace colplan
