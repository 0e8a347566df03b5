#include "shuttleswarm/harness/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "shuttleswarm/errors.hpp"

namespace shuttleswarm::harness {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const char* to_string(WorkplaceMode m) {
  switch (m) {
    case WorkplaceMode::diversified: return "diversified";
    case WorkplaceMode::two: return "two";
    case WorkplaceMode::one: return "one";
  }
  return "?";
}

void ScenarioConfig::validate() const {
  if (grid.has_value() == city_file.has_value()) {
    throw ConfigError("scenario needs exactly one city source (grid or file)");
  }
  if (grid) {
    if (grid->rows < 2 || grid->cols < 2 || !(grid->block_m > 0)) {
      throw ConfigError("grid city needs rows >= 2, cols >= 2, block_m > 0");
    }
  }
  if (fleet_size < 0) throw ConfigError("fleet_size must be >= 0");
  if (user_count < 0) throw ConfigError("user_count must be >= 0");
  if (common_car_count && *common_car_count < 0) {
    throw ConfigError("common_car_count must be >= 0");
  }
  if (!(work_start_min < work_start_max)) {
    throw ConfigError("work start window must have start < end");
  }
  if (!(angle_threshold_deg > 0.0 && angle_threshold_deg < 180.0)) {
    throw ConfigError("angle_threshold_deg must be in (0, 180)");
  }
  if (cost_per_km < 0) throw ConfigError("cost_per_km must be >= 0");
  if (wait_timeout <= 0) throw ConfigError("wait_timeout must be > 0");
  if (pickup_radius_m <= 0) throw ConfigError("pickup_radius_m must be > 0");
  if (lookahead < 0) throw ConfigError("lookahead must be >= 0");
  if (step_seconds <= 0) throw ConfigError("step_seconds must be > 0");
  if (start_time < 0 || start_time >= 86400) {
    throw ConfigError("start_time must be within the day");
  }
  if (dwell_seconds < 0) throw ConfigError("dwell_seconds must be >= 0");
  if (congestion_alpha < 0) throw ConfigError("congestion_alpha must be >= 0");
  if (solo_speed_kmh <= 0 || shuttle_speed_kmh <= 0 || car_speed_kmh <= 0) {
    throw ConfigError("speeds must be > 0");
  }
  if (sampling_interval <= 0) throw ConfigError("sampling_interval must be > 0");
  if (max_ticks < 0) throw ConfigError("max_ticks must be >= 0");
  if (work_hours <= 0) throw ConfigError("work_hours must be > 0");
}

namespace {

const std::set<std::string> kKnownKeys = {
    "city", "fleet_size", "user_count", "common_car_count", "workplace_mode",
    "cost_per_km", "work_start_min", "work_start_max", "work_hours",
    "wait_timeout", "pickup_radius_m", "angle_threshold_deg", "lookahead",
    "step_seconds", "start_time", "dwell_seconds", "congestion_alpha",
    "solo_speed_kmh", "shuttle_speed_kmh", "car_speed_kmh",
    "sampling_interval", "seed", "max_ticks"};

WorkplaceMode mode_from_string(const std::string& s) {
  if (s == "diversified") return WorkplaceMode::diversified;
  if (s == "two") return WorkplaceMode::two;
  if (s == "one") return WorkplaceMode::one;
  throw ConfigError("unknown workplace_mode '" + s + "'");
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario config parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("scenario config must be a JSON object");

  for (const auto& [key, value] : doc.items()) {
    if (!kKnownKeys.count(key)) {
      throw ConfigError("unknown scenario config key '" + key + "'");
    }
  }

  ScenarioConfig cfg;
  try {
    if (doc.contains("city")) {
      const auto& city = doc["city"];
      if (city.contains("grid")) {
        GridCitySpec g;
        const auto& gj = city["grid"];
        g.rows = gj.value("rows", g.rows);
        g.cols = gj.value("cols", g.cols);
        g.block_m = gj.value("block_m", g.block_m);
        if (gj.contains("seed")) g.seed = gj["seed"].get<std::uint64_t>();
        cfg.grid = g;
      } else if (city.contains("file")) {
        cfg.city_file = city["file"].get<std::string>();
      } else {
        throw ConfigError("city must contain 'grid' or 'file'");
      }
    } else {
      cfg.grid = GridCitySpec{};  // desk-scale default city
    }
    cfg.fleet_size = doc.value("fleet_size", cfg.fleet_size);
    cfg.user_count = doc.value("user_count", cfg.user_count);
    if (doc.contains("common_car_count")) {
      cfg.common_car_count = doc["common_car_count"].get<int>();
    }
    if (doc.contains("workplace_mode")) {
      cfg.workplace_mode = mode_from_string(doc["workplace_mode"].get<std::string>());
    }
    cfg.cost_per_km = doc.value("cost_per_km", cfg.cost_per_km);
    cfg.work_start_min = doc.value("work_start_min", cfg.work_start_min);
    cfg.work_start_max = doc.value("work_start_max", cfg.work_start_max);
    cfg.work_hours = doc.value("work_hours", cfg.work_hours);
    cfg.wait_timeout = doc.value("wait_timeout", cfg.wait_timeout);
    cfg.pickup_radius_m = doc.value("pickup_radius_m", cfg.pickup_radius_m);
    cfg.angle_threshold_deg = doc.value("angle_threshold_deg", cfg.angle_threshold_deg);
    cfg.lookahead = doc.value("lookahead", cfg.lookahead);
    cfg.step_seconds = doc.value("step_seconds", cfg.step_seconds);
    cfg.start_time = doc.value("start_time", cfg.start_time);
    cfg.dwell_seconds = doc.value("dwell_seconds", cfg.dwell_seconds);
    cfg.congestion_alpha = doc.value("congestion_alpha", cfg.congestion_alpha);
    cfg.solo_speed_kmh = doc.value("solo_speed_kmh", cfg.solo_speed_kmh);
    cfg.shuttle_speed_kmh = doc.value("shuttle_speed_kmh", cfg.shuttle_speed_kmh);
    cfg.car_speed_kmh = doc.value("car_speed_kmh", cfg.car_speed_kmh);
    cfg.sampling_interval = doc.value("sampling_interval", cfg.sampling_interval);
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.seed_in_config = doc.contains("seed");
    cfg.max_ticks = doc.value("max_ticks", cfg.max_ticks);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario config type error: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string ScenarioConfig::to_canonical_json() const {
  ordered_json j;
  if (grid) {
    ordered_json g;
    g["rows"] = grid->rows;
    g["cols"] = grid->cols;
    g["block_m"] = grid->block_m;
    g["seed"] = grid->seed ? ordered_json(*grid->seed) : ordered_json(nullptr);
    j["city"] = ordered_json{{"grid", g}};
  } else {
    j["city"] = ordered_json{{"file", *city_file}};
  }
  j["fleet_size"] = fleet_size;
  j["user_count"] = user_count;
  j["common_car_count"] = car_count();
  j["workplace_mode"] = to_string(workplace_mode);
  j["cost_per_km"] = cost_per_km;
  j["work_start_min"] = work_start_min;
  j["work_start_max"] = work_start_max;
  j["work_hours"] = work_hours;
  j["wait_timeout"] = wait_timeout;
  j["pickup_radius_m"] = pickup_radius_m;
  j["angle_threshold_deg"] = angle_threshold_deg;
  j["lookahead"] = lookahead;
  j["step_seconds"] = step_seconds;
  j["start_time"] = start_time;
  j["dwell_seconds"] = dwell_seconds;
  j["congestion_alpha"] = congestion_alpha;
  j["solo_speed_kmh"] = solo_speed_kmh;
  j["shuttle_speed_kmh"] = shuttle_speed_kmh;
  j["car_speed_kmh"] = car_speed_kmh;
  j["sampling_interval"] = sampling_interval;
  j["seed"] = seed;
  j["max_ticks"] = effective_max_ticks();
  return j.dump(2) + "\n";
}

std::uint64_t run_content_hash(const ScenarioConfig& cfg) {
  const std::string text = cfg.to_canonical_json();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string run_dir_name(const ScenarioConfig& cfg) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "run-%016llx",
                static_cast<unsigned long long>(run_content_hash(cfg)));
  return buf;
}

}  // namespace shuttleswarm::harness
