#include "shuttleswarm/audit/validators.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "shuttleswarm/costing/ledger.hpp"
#include "shuttleswarm/errors.hpp"
#include "shuttleswarm/geo/geometry.hpp"

namespace shuttleswarm::audit {

using nlohmann::json;

namespace {

bool person_edge_ok(const std::string& from, const std::string& to) {
  if (from == "resting") return to == "search_lift_to_work";
  if (from == "search_lift_to_work") return to == "wait_for_lift" || to == "go_work";
  if (from == "wait_for_lift") return to == "go_work" || to == "go_home";
  if (from == "go_work") return to == "working";
  if (from == "working") return to == "search_lift_to_home";
  if (from == "search_lift_to_home") return to == "wait_for_lift" || to == "go_home";
  if (from == "go_home") return to == "resting";
  return false;
}

bool shuttle_edge_ok(const std::string& from, const std::string& to) {
  if (from == "wander") return to == "first_stop";
  if (from == "first_stop") return to == "moving";
  if (from == "moving") return to == "stop";
  if (from == "stop") return to == "moving" || to == "wander";
  return false;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("missing file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<Violation> validate_events(const engine::EventLog& log,
                                       double angle_threshold_deg, int capacity) {
  std::vector<Violation> out;
  std::map<std::string, std::string> agent_state;  // "P3"/"S1" -> state
  std::map<std::string, std::set<PersonId>> onboard;
  std::map<std::string, std::set<NodeId>> visited;

  auto initial_state = [](const std::string& agent) {
    return agent[0] == 'P' ? std::string("resting") : std::string("wander");
  };

  for (const auto& rec : log.records) {
    if (rec.kind == "transition") {
      const std::string agent = rec.get("agent");
      const std::string from = rec.get("from");
      const std::string to = rec.get("to");
      auto it = agent_state.find(agent);
      const std::string current =
          it == agent_state.end() ? initial_state(agent) : it->second;
      if (from != current) {
        out.push_back({"fsm", agent + " claims from=" + from + " but was " +
                                  current + " at t=" + std::to_string(rec.t)});
      }
      const bool ok = agent[0] == 'P' ? person_edge_ok(from, to)
                                      : shuttle_edge_ok(from, to);
      if (!ok) {
        out.push_back({"fsm", agent + " illegal transition " + from + "->" + to +
                                  " at t=" + std::to_string(rec.t)});
      }
      agent_state[agent] = to;
      if (agent[0] == 'S' && to == "wander") visited[agent].clear();
    } else if (rec.kind == "stop") {
      const std::string shuttle = "S" + rec.get("shuttle");
      auto& aboard = onboard[shuttle];
      for (PersonId p : engine::split_ids(rec.get("alighted"))) {
        if (!aboard.erase(p)) {
          out.push_back({"seats", shuttle + " alighted person " + std::to_string(p) +
                                      " who was not aboard at t=" + std::to_string(rec.t)});
        }
      }
      for (PersonId p : engine::split_ids(rec.get("boarded"))) {
        if (!aboard.insert(p).second) {
          out.push_back({"seats", shuttle + " boarded person " + std::to_string(p) +
                                      " twice at t=" + std::to_string(rec.t)});
        }
      }
      if (static_cast<int>(aboard.size()) > capacity) {
        out.push_back({"seats", shuttle + " holds " + std::to_string(aboard.size()) +
                                    " passengers at t=" + std::to_string(rec.t)});
      }
      visited[shuttle].insert(static_cast<NodeId>(std::stol(rec.get("node"))));
    } else if (rec.kind == "admit") {
      const std::string shuttle = "S" + rec.get("shuttle");
      const NodeId dest = static_cast<NodeId>(std::stol(rec.get("dest")));
      const geo::Vec2 s{std::stod(rec.get("sx")), std::stod(rec.get("sy"))};
      const geo::Vec2 f{std::stod(rec.get("fx")), std::stod(rec.get("fy"))};
      const geo::Vec2 d{std::stod(rec.get("dx")), std::stod(rec.get("dy"))};
      double angle;
      try {
        angle = geo::bearing_angle_deg(s, f, d);
      } catch (const DomainError&) {
        out.push_back({"angle", shuttle + " admitted person " + rec.get("person") +
                                    " with undefined bearing at t=" +
                                    std::to_string(rec.t)});
        continue;
      }
      const double logged = std::stod(rec.get("angle"));
      if (std::fabs(angle - logged) > 1e-9) {
        out.push_back({"angle", shuttle + " logged angle " + rec.get("angle") +
                                    " but geometry gives " +
                                    engine::fmt_double(angle)});
      }
      if (angle > angle_threshold_deg) {
        out.push_back({"angle", shuttle + " admitted person " + rec.get("person") +
                                    " at " + engine::fmt_double(angle) +
                                    " deg (> " +
                                    engine::fmt_double(angle_threshold_deg) +
                                    ") at t=" + std::to_string(rec.t)});
      }
      if (visited[shuttle].count(dest)) {
        out.push_back({"visited_stop", shuttle + " admitted person " +
                                           rec.get("person") +
                                           " toward already-visited stop " +
                                           std::to_string(dest) + " at t=" +
                                           std::to_string(rec.t)});
      }
      if (rec.get("guard") == "1") {
        const double change = std::stod(rec.get("change"));
        const double avtime = std::stod(rec.get("avtime"));
        const double ta = std::stod(rec.get("ta_orig"));
        if (!(change < ta * 1.5)) {
          out.push_back({"lateness_guard",
                         shuttle + " admission change " + rec.get("change") +
                             " breaches 1.5x original " + rec.get("ta_orig")});
        }
        if (!(change <= avtime)) {
          out.push_back({"lateness_guard",
                         shuttle + " admission change " + rec.get("change") +
                             " exceeds available time " + rec.get("avtime")});
        }
      }
    }
  }
  return out;
}

std::vector<Violation> validate_ledger(const std::string& ledger_csv,
                                       const std::string& report_json,
                                       double cost_per_km) {
  std::vector<Violation> out;
  const auto rate = costing::Money::from_units(cost_per_km);

  struct LegRow {
    int shuttle;
    double length_m;
    std::int64_t cost_micros;
    std::vector<PersonId> passengers;
  };
  std::vector<LegRow> rows;
  {
    std::istringstream in(ledger_csv);
    std::string line;
    if (!std::getline(in, line) ||
        line != "shuttle,leg_index,from,to,length_m,cost_micros,passengers") {
      throw ParseError("ledger.csv: unexpected header");
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::vector<std::string> cell;
      std::size_t pos = 0;
      while (cell.size() < 7) {
        const auto comma = line.find(',', pos);
        if (comma == std::string::npos) {
          cell.push_back(line.substr(pos));
          break;
        }
        cell.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
      }
      if (cell.size() != 7) {
        throw ParseError("ledger.csv line " + std::to_string(lineno) + ": bad row");
      }
      LegRow row;
      row.shuttle = std::stoi(cell[0]);
      row.length_m = std::stod(cell[4]);
      row.cost_micros = std::stoll(cell[5]);
      std::string ids = cell[6];
      for (auto& c : ids) {
        if (c == ';') c = ',';
      }
      row.passengers = engine::split_ids(ids.empty() ? "-" : ids);
      rows.push_back(std::move(row));
    }
  }

  json report;
  try {
    report = json::parse(report_json);
  } catch (const json::exception& e) {
    throw ParseError(std::string("report.json parse error: ") + e.what());
  }

  std::map<int, std::int64_t> billed_by_shuttle;
  std::map<int, double> length_by_shuttle;
  std::map<PersonId, std::int64_t> charges;
  for (const auto& row : rows) {
    const auto expect = costing::leg_cost(row.length_m, rate);
    if (row.passengers.empty()) {
      if (row.cost_micros != 0) {
        out.push_back({"leg_cost", "dead-running leg billed " +
                                       std::to_string(row.cost_micros) + " micros"});
      }
    } else if (expect.micros != row.cost_micros) {
      out.push_back({"leg_cost",
                     "leg of " + engine::fmt_double(row.length_m) + " m costs " +
                         std::to_string(row.cost_micros) + " micros, expected " +
                         std::to_string(expect.micros)});
    }
    billed_by_shuttle[row.shuttle] += row.passengers.empty() ? 0 : row.cost_micros;
    length_by_shuttle[row.shuttle] += row.length_m;
    if (!row.passengers.empty()) {
      costing::Leg leg;
      leg.cost = costing::Money::from_micros(row.cost_micros);
      leg.passengers = row.passengers;
      for (const auto& [person, share] : costing::split_leg(leg)) {
        charges[person] += share.micros;
      }
    }
  }

  // Conservation per shuttle is structural in the split; fleet-level checks
  // compare against the report.
  std::int64_t total_billed = 0;
  for (const auto& [shuttle, billed] : billed_by_shuttle) total_billed += billed;
  std::int64_t total_charged = 0;
  for (const auto& [person, c] : charges) total_charged += c;
  if (total_billed != total_charged) {
    out.push_back({"conservation",
                   "charges sum to " + std::to_string(total_charged) +
                       " micros but billed legs sum to " + std::to_string(total_billed)});
  }
  if (report.contains("total_gain_micros")) {
    const std::int64_t gain = report["total_gain_micros"].get<std::int64_t>();
    if (gain != total_billed) {
      out.push_back({"conservation", "report total_gain_micros " +
                                         std::to_string(gain) + " != billed " +
                                         std::to_string(total_billed)});
    }
  }
  if (report.contains("cost_distribution")) {
    for (const auto& entry : report["cost_distribution"]) {
      const PersonId person = entry["person"].get<PersonId>();
      const std::int64_t micros = entry["cost_micros"].get<std::int64_t>();
      const auto it = charges.find(person);
      const std::int64_t computed = it == charges.end() ? 0 : it->second;
      if (computed != micros) {
        out.push_back({"conservation",
                       "person " + std::to_string(person) + " charged " +
                           std::to_string(micros) + " in report, ledger gives " +
                           std::to_string(computed)});
      }
    }
  }
  if (report.contains("per_shuttle")) {
    for (const auto& entry : report["per_shuttle"]) {
      const int id = entry["id"].get<int>();
      const double km = entry["odometer_km"].get<double>();
      const double ledger_m = length_by_shuttle.count(id) ? length_by_shuttle[id] : 0.0;
      const double odo_m = km * 1000.0;
      const double scale = std::max(1.0, std::fabs(odo_m));
      if (std::fabs(odo_m - ledger_m) > 1e-6 * scale) {
        out.push_back({"odometer",
                       "shuttle " + std::to_string(id) + " odometer " +
                           engine::fmt_double(odo_m) + " m vs ledger " +
                           engine::fmt_double(ledger_m) + " m"});
      }
      const std::int64_t billed = entry["billed_micros"].get<std::int64_t>();
      const std::int64_t computed =
          billed_by_shuttle.count(id) ? billed_by_shuttle[id] : 0;
      if (billed != computed) {
        out.push_back({"conservation", "shuttle " + std::to_string(id) +
                                           " billed " + std::to_string(billed) +
                                           " in report, ledger gives " +
                                           std::to_string(computed)});
      }
    }
  }
  return out;
}

std::vector<Violation> validate_cross(const engine::EventLog& log,
                                      const std::string& report_json) {
  std::vector<Violation> out;
  json report;
  try {
    report = json::parse(report_json);
  } catch (const json::exception& e) {
    throw ParseError(std::string("report.json parse error: ") + e.what());
  }
  std::set<PersonId> boarded_any;
  for (const auto& rec : log.records) {
    if (rec.kind != "stop") continue;
    for (PersonId p : engine::split_ids(rec.get("boarded"))) boarded_any.insert(p);
  }
  // Boarded passengers still riding when a run is truncated are not served,
  // so the person-side count may only fall short in incomplete runs.
  const bool incomplete = report.value("incomplete", false);
  const int served = report.value("users_served", 0);
  const int boarded = static_cast<int>(boarded_any.size());
  if (served != boarded && !(incomplete && served < boarded)) {
    out.push_back({"double_entry",
                   "users_served=" + std::to_string(served) + " but " +
                       std::to_string(boarded) + " distinct persons boarded"});
  }
  return out;
}

std::vector<Violation> validate_run_dir(const std::string& dir) {
  const std::string config_text = read_file(dir + "/config.json");
  const std::string report_text = read_file(dir + "/report.json");
  const std::string ledger_text = read_file(dir + "/ledger.csv");
  const std::string events_text = read_file(dir + "/events.log");

  json config;
  try {
    config = json::parse(config_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config.json parse error: ") + e.what());
  }
  const double threshold = config.value("angle_threshold_deg", 20.0);
  const double cost_per_km = config.value("cost_per_km", 1.0);

  const auto log = engine::EventLog::parse(events_text);
  std::vector<Violation> out = validate_events(log, threshold);
  for (auto& v : validate_ledger(ledger_text, report_text, cost_per_km)) {
    out.push_back(std::move(v));
  }
  for (auto& v : validate_cross(log, report_text)) {
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace shuttleswarm::audit
