#include "shuttleswarm/metrics/report.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "json.hpp"
#include "shuttleswarm/engine/world.hpp"
#include "shuttleswarm/errors.hpp"

namespace shuttleswarm::metrics {

using ordered_json = nlohmann::ordered_json;

namespace {

bool person_served(const agents::Person& p) {
  return p.served_to_work || p.served_to_home;
}

bool person_served_late(const agents::Person& p) {
  return p.served_to_work && p.stats.late;
}

long count_served(const engine::World& w) {
  long n = 0;
  for (const auto& p : w.persons) n += person_served(p);
  return n;
}

long count_late_served(const engine::World& w) {
  long n = 0;
  for (const auto& p : w.persons) n += person_served_late(p);
  return n;
}

long count_in_use(const engine::World& w) {
  long n = 0;
  for (const auto& s : w.shuttles) n += s.state != agents::ShuttleState::wander;
  return n;
}

double exact_2dp(std::int64_t num, std::int64_t den) {
  return static_cast<double>(costing::round_div_half_even(num, den)) / 100.0;
}

}  // namespace

std::optional<double> MetricsReport::avg_waiting_minutes() const {
  if (wait_samples == 0) return std::nullopt;
  // seconds -> minutes with exact half-even rounding at 2 decimals
  return exact_2dp(wait_total_s * 100, wait_samples * 60);
}

std::optional<double> MetricsReport::avg_late_minutes() const {
  if (served_late_count == 0) return std::nullopt;
  return exact_2dp(late_total_s * 100, static_cast<std::int64_t>(served_late_count) * 60);
}

std::optional<double> MetricsReport::avg_travel_cost() const {
  if (cost_distribution.empty()) return std::nullopt;
  std::int64_t total = 0;
  for (const auto& [p, m] : cost_distribution) total += m.micros;
  return exact_2dp(total, static_cast<std::int64_t>(cost_distribution.size()) * 10000);
}

double MetricsReport::served_pct() const {
  if (users_total == 0) return 0.0;
  return 100.0 * static_cast<double>(users_served) / users_total;
}

void Collector::collect(const engine::World& w) {
  if (next_sample_ < 0) next_sample_ = w.clock;  // first tick
  if (w.clock < next_sample_) return;
  series_.interval = interval_;
  series_.served.emplace_back(w.clock, count_served(w));
  series_.shuttles_in_use.emplace_back(w.clock, count_in_use(w));
  series_.late.emplace_back(w.clock, count_late_served(w));
  next_sample_ = w.clock + interval_;
}

MetricsReport Collector::summarize(const engine::World& w, bool incomplete) const {
  MetricsReport r;
  r.incomplete = incomplete;
  r.series = series_;
  r.series.interval = interval_;

  r.users_total = static_cast<int>(w.persons.size());
  std::map<PersonId, costing::Money> charges;
  for (const auto& s : w.shuttles) {
    for (const auto& [person, m] : s.ledger.charges()) charges[person] += m;
  }

  for (const auto& p : w.persons) {
    if (person_served(p)) {
      ++r.users_served;
      auto it = charges.find(p.id);
      r.cost_distribution.emplace_back(
          p.id, it == charges.end() ? costing::Money{} : it->second);
    }
    if (person_served_late(p)) {
      ++r.served_late_count;
      r.late_total_s += p.stats.actual_time_in - p.work_start;
    }
    for (SimSeconds sample : p.wait_samples_s) {
      ++r.wait_samples;
      r.wait_total_s += sample;
    }
  }

  if (!w.shuttles.empty()) {
    long long lifts_total = 0;
    double km_total = 0.0;
    r.lifts_min = w.shuttles.front().cumulative_lifts;
    r.lifts_max = r.lifts_min;
    for (const auto& s : w.shuttles) {
      PerShuttle ps;
      ps.id = s.id;
      ps.odometer_km = s.odometer_m / 1000.0;
      ps.lifts = s.cumulative_lifts;
      ps.billed = s.ledger.billed_cost();
      r.per_shuttle.push_back(ps);
      lifts_total += s.cumulative_lifts;
      km_total += ps.odometer_km;
      r.lifts_min = std::min(r.lifts_min, s.cumulative_lifts);
      r.lifts_max = std::max(r.lifts_max, s.cumulative_lifts);
      r.total_gain += ps.billed;
    }
    r.lifts_avg = static_cast<double>(lifts_total) / static_cast<double>(w.shuttles.size());
    r.avg_km_per_shuttle = km_total / static_cast<double>(w.shuttles.size());
  }

  // Close each series on the final counters so the last sample equals the
  // scalar report values.
  const SimSeconds now = w.clock;
  auto close = [&](std::vector<std::pair<SimSeconds, long>>& s, long final_value) {
    if (!s.empty() && s.back().first == now) {
      s.back().second = final_value;
    } else {
      s.emplace_back(now, final_value);
    }
  };
  close(r.series.served, count_served(w));
  close(r.series.shuttles_in_use, count_in_use(w));
  close(r.series.late, count_late_served(w));
  return r;
}

namespace {

ordered_json opt_num(std::optional<double> v) {
  if (!v) return nullptr;
  return *v;
}

std::string fmt_or_empty(std::optional<double> v) {
  if (!v) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", *v);
  return buf;
}

std::string fmt_raw(std::optional<double> v) {
  if (!v) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", *v);
  return buf;
}

}  // namespace

std::string report_json_text(const MetricsReport& r) {
  ordered_json j;
  j["users_total"] = r.users_total;
  j["users_served"] = r.users_served;
  j["served_late_count"] = r.served_late_count;
  j["avg_late_minutes"] = opt_num(r.avg_late_minutes());
  j["avg_waiting_minutes"] = opt_num(r.avg_waiting_minutes());
  j["avg_travel_cost"] = opt_num(r.avg_travel_cost());
  j["total_gain"] = costing::money_to_2dp(r.total_gain);
  j["total_gain_micros"] = r.total_gain.micros;
  j["lifts_avg"] = opt_num(r.lifts_avg);
  j["lifts_min"] = r.lifts_min;
  j["lifts_max"] = r.lifts_max;
  j["avg_km_per_shuttle"] = opt_num(r.avg_km_per_shuttle);
  j["incomplete"] = r.incomplete;
  ordered_json dist = ordered_json::array();
  for (const auto& [person, m] : r.cost_distribution) {
    dist.push_back(ordered_json{{"person", person},
                                {"cost", costing::money_to_2dp(m)},
                                {"cost_micros", m.micros}});
  }
  j["cost_distribution"] = std::move(dist);
  ordered_json fleet = ordered_json::array();
  for (const auto& ps : r.per_shuttle) {
    fleet.push_back(ordered_json{{"id", ps.id},
                                 {"odometer_km", ps.odometer_km},
                                 {"lifts", ps.lifts},
                                 {"billed_micros", ps.billed.micros}});
  }
  j["per_shuttle"] = std::move(fleet);
  j["series_interval_s"] = r.series.interval;
  return j.dump(2) + "\n";
}

std::string report_csv_text(const MetricsReport& r) {
  std::string out = "metric,value\n";
  out += "users_total," + std::to_string(r.users_total) + "\n";
  out += "users_served," + std::to_string(r.users_served) + "\n";
  out += "served_late_count," + std::to_string(r.served_late_count) + "\n";
  out += "avg_late_minutes," + fmt_or_empty(r.avg_late_minutes()) + "\n";
  out += "avg_waiting_minutes," + fmt_or_empty(r.avg_waiting_minutes()) + "\n";
  out += "avg_travel_cost," + fmt_or_empty(r.avg_travel_cost()) + "\n";
  out += "total_gain," + costing::format_money_2dp(r.total_gain) + "\n";
  out += "lifts_avg," + fmt_or_empty(r.lifts_avg) + "\n";
  out += "lifts_min," + std::to_string(r.lifts_min) + "\n";
  out += "lifts_max," + std::to_string(r.lifts_max) + "\n";
  out += "avg_km_per_shuttle," + fmt_raw(r.avg_km_per_shuttle) + "\n";
  out += std::string("incomplete,") + (r.incomplete ? "true" : "false") + "\n";
  return out;
}

std::string series_csv_text(const MetricsReport& r) {
  std::string out = "series,time_s,value\n";
  auto rows = [&](const char* name, const std::vector<std::pair<SimSeconds, long>>& s) {
    for (const auto& [t, v] : s) {
      out += name;
      out += ',';
      out += std::to_string(t);
      out += ',';
      out += std::to_string(v);
      out += '\n';
    }
  };
  rows("served_users", r.series.served);
  rows("shuttles_in_use", r.series.shuttles_in_use);
  rows("late_users", r.series.late);
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file: " + path);
  out << text;
}

}  // namespace shuttleswarm::metrics
