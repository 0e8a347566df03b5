#include "shuttleswarm/harness/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "shuttleswarm/errors.hpp"

namespace shuttleswarm::harness {

using nlohmann::json;

const char* to_string(SweepSpec::Param p) {
  return p == SweepSpec::Param::fleet_size ? "fleet_size" : "user_count";
}

void SweepSpec::validate() const {
  base.validate();
  if (values.empty()) throw ConfigError("sweep needs a non-empty value list");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] <= values[i - 1]) {
      throw ConfigError("sweep values must be strictly increasing");
    }
  }
  for (int v : values) {
    if (v < 0) throw ConfigError("sweep values must be >= 0");
  }
  if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
}

SweepSpec SweepSpec::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("sweep spec parse error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("base") || !doc.contains("param") ||
      !doc.contains("values") || !doc.contains("seeds")) {
    throw ConfigError("sweep spec needs base, param, values, seeds");
  }
  SweepSpec spec;
  spec.base = ScenarioConfig::from_json_text(doc["base"].dump());
  const std::string param = doc["param"].get<std::string>();
  if (param == "fleet_size") {
    spec.param = Param::fleet_size;
  } else if (param == "user_count") {
    spec.param = Param::user_count;
  } else {
    throw ConfigError("sweep param must be fleet_size or user_count");
  }
  try {
    spec.values = doc["values"].get<std::vector<int>>();
    spec.seeds = doc["seeds"].get<std::vector<std::uint64_t>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("sweep spec type error: ") + e.what());
  }
  spec.validate();
  return spec;
}

SweepSpec SweepSpec::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sweep spec: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

ScenarioConfig SweepSpec::config_for(int value) const {
  ScenarioConfig cfg = base;
  if (param == Param::fleet_size) {
    cfg.fleet_size = value;
  } else {
    cfg.user_count = value;
    cfg.common_car_count = base.car_count();  // traffic held fixed across points
  }
  return cfg;
}

void Stat::fold(const std::vector<double>& xs) {
  n = static_cast<int>(xs.size());
  if (xs.empty()) return;
  min = xs.front();
  max = xs.front();
  double sum = 0.0;
  for (double x : xs) {
    sum += x;
    min = std::min(min, x);
    max = std::max(max, x);
  }
  mean = sum / static_cast<double>(n);
}

SuiteResult run_experiment_suite(const SweepSpec& spec, int jobs) {
  spec.validate();
  const std::size_t runs = spec.values.size() * spec.seeds.size();
  std::vector<metrics::MetricsReport> reports(runs);

  auto job = [&](std::size_t index) {
    const std::size_t v = index / spec.seeds.size();
    const std::size_t s = index % spec.seeds.size();
    const auto cfg = spec.config_for(spec.values[v]);
    reports[index] = engine::run_scenario(cfg, spec.seeds[s]).report;
  };

  if (jobs <= 1) {
    for (std::size_t i = 0; i < runs; ++i) job(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const int count = std::min<int>(jobs, static_cast<int>(runs));
    workers.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) {
      workers.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= runs) return;
          job(i);
        }
      });
    }
    for (auto& worker : workers) worker.join();
  }

  SuiteResult result;
  for (std::size_t v = 0; v < spec.values.size(); ++v) {
    PointAggregate point;
    point.value = spec.values[v];
    std::vector<double> served, late, wait, late_min, cost, lifts, gain, km;
    for (std::size_t s = 0; s < spec.seeds.size(); ++s) {
      const auto& rep = reports[v * spec.seeds.size() + s];
      ++point.runs;
      point.per_seed.emplace_back(spec.seeds[s], rep);
      if (rep.incomplete) {
        // Flagged, and left out of the aggregates below.
        ++point.incomplete_runs;
        continue;
      }
      served.push_back(rep.served_pct());
      if (rep.users_served > 0) {
        late.push_back(100.0 * rep.served_late_count / rep.users_served);
      }
      if (auto w = rep.avg_waiting_minutes()) wait.push_back(*w);
      if (auto l = rep.avg_late_minutes()) late_min.push_back(*l);
      if (auto c = rep.avg_travel_cost()) cost.push_back(*c);
      if (rep.lifts_avg) lifts.push_back(*rep.lifts_avg);
      gain.push_back(costing::money_to_2dp(rep.total_gain));
      if (rep.avg_km_per_shuttle) km.push_back(*rep.avg_km_per_shuttle);
    }
    point.served_pct.fold(served);
    point.late_pct.fold(late);
    point.avg_wait_min.fold(wait);
    point.avg_late_min.fold(late_min);
    point.avg_cost.fold(cost);
    point.lifts_avg.fold(lifts);
    point.total_gain.fold(gain);
    point.km_per_shuttle.fold(km);
    result.points.push_back(std::move(point));
  }
  return result;
}

namespace {

void append_stat(std::string& out, const Stat& s) {
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return std::string(buf);
  };
  if (!s.present()) {
    out += ",,";  // three empty columns
    return;
  }
  out += num(s.mean);
  out += ',';
  out += num(s.min);
  out += ',';
  out += num(s.max);
}

}  // namespace

std::string suite_summary_csv(const SweepSpec& spec, const SuiteResult& result) {
  std::string out = "param,value,runs,incomplete";
  for (const char* name :
       {"served_pct", "late_pct", "avg_wait_min", "avg_late_min", "avg_cost",
        "lifts_avg", "total_gain", "km_per_shuttle"}) {
    out += ',';
    out += name;
    out += "_mean,";
    out += name;
    out += "_min,";
    out += name;
    out += "_max";
  }
  out += '\n';
  for (const auto& p : result.points) {
    out += to_string(spec.param);
    out += ',';
    out += std::to_string(p.value);
    out += ',';
    out += std::to_string(p.runs);
    out += ',';
    out += std::to_string(p.incomplete_runs);
    out += ',';
    append_stat(out, p.served_pct);
    out += ',';
    append_stat(out, p.late_pct);
    out += ',';
    append_stat(out, p.avg_wait_min);
    out += ',';
    append_stat(out, p.avg_late_min);
    out += ',';
    append_stat(out, p.avg_cost);
    out += ',';
    append_stat(out, p.lifts_avg);
    out += ',';
    append_stat(out, p.total_gain);
    out += ',';
    append_stat(out, p.km_per_shuttle);
    out += '\n';
  }
  return out;
}

}  // namespace shuttleswarm::harness
