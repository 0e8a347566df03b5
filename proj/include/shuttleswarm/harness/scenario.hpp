#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "shuttleswarm/ids.hpp"

namespace shuttleswarm::harness {

enum class WorkplaceMode { diversified, two, one };
const char* to_string(WorkplaceMode m);

struct GridCitySpec {
  int rows = 8;
  int cols = 8;
  double block_m = 150.0;
  std::optional<std::uint64_t> seed;  // defaults to the scenario seed
};

// Full experiment input. JSON keys mirror the field names; unknown keys are
// rejected. Times are sim-seconds since 00:00.
struct ScenarioConfig {
  std::optional<GridCitySpec> grid;      // exactly one of grid / city_file
  std::optional<std::string> city_file;

  int fleet_size = 10;
  int user_count = 100;
  std::optional<int> common_car_count;   // default: user_count / 4
  WorkplaceMode workplace_mode = WorkplaceMode::diversified;
  double cost_per_km = 1.0;
  SimSeconds work_start_min = 28800;     // 08:00
  SimSeconds work_start_max = 36000;     // 10:00
  SimSeconds work_hours = 28800;         // work_end = work_start + 8 h
  SimSeconds wait_timeout = 600;
  double pickup_radius_m = 300.0;
  double angle_threshold_deg = 20.0;
  SimSeconds lookahead = 1800;
  SimSeconds step_seconds = 1;
  SimSeconds start_time = 21600;         // 06:00
  SimSeconds dwell_seconds = 10;
  double congestion_alpha = 0.25;
  double solo_speed_kmh = 30.0;
  double shuttle_speed_kmh = 20.0;  // pilot-deployment shuttle pace
  double car_speed_kmh = 50.0;
  SimSeconds sampling_interval = 60;
  std::uint64_t seed = 42;
  bool seed_in_config = false;           // whether the JSON set it explicitly
  std::int64_t max_ticks = 0;            // 0: derived from the 24 h horizon

  int car_count() const {
    return common_car_count ? *common_car_count : user_count / 4;
  }
  std::int64_t effective_max_ticks() const {
    if (max_ticks > 0) return max_ticks;
    return (86400 - start_time) / step_seconds;
  }

  void validate() const;  // throws ConfigError
  static ScenarioConfig from_json_text(const std::string& text);
  static ScenarioConfig from_file(const std::string& path);
  // Fully resolved, stable key order; the run-directory content hash and the
  // config echo are built from this.
  std::string to_canonical_json() const;
};

// FNV-1a over the canonical config text and the effective seed; names the
// run directory.
std::uint64_t run_content_hash(const ScenarioConfig& cfg);
std::string run_dir_name(const ScenarioConfig& cfg);

}  // namespace shuttleswarm::harness
