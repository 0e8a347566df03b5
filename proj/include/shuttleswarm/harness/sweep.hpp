#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shuttleswarm/engine/run.hpp"
#include "shuttleswarm/harness/scenario.hpp"

namespace shuttleswarm::harness {

struct SweepSpec {
  enum class Param { fleet_size, user_count };

  ScenarioConfig base;
  Param param = Param::fleet_size;
  std::vector<int> values;          // strictly increasing
  std::vector<std::uint64_t> seeds; // seeds per point

  void validate() const;
  static SweepSpec from_json_text(const std::string& text);
  static SweepSpec from_file(const std::string& path);
  ScenarioConfig config_for(int value) const;
};
const char* to_string(SweepSpec::Param p);

// min/mean/max of a metric across the seeds where it was present.
struct Stat {
  int n = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;

  void fold(const std::vector<double>& xs);
  bool present() const { return n > 0; }
};

struct PointAggregate {
  int value = 0;
  int runs = 0;
  int incomplete_runs = 0;
  Stat served_pct, late_pct, avg_wait_min, avg_late_min, avg_cost, lifts_avg,
      total_gain, km_per_shuttle;
  // Raw per-seed reports in seed order, for per-seed trend analysis.
  std::vector<std::pair<std::uint64_t, metrics::MetricsReport>> per_seed;
};

struct SuiteResult {
  std::vector<PointAggregate> points;  // in value order
};

// values x seeds runs; points and seeds may execute in parallel (jobs > 1),
// aggregation folds in (point, seed) order so the summary is byte-identical
// regardless of scheduling.
SuiteResult run_experiment_suite(const SweepSpec& spec, int jobs = 1);

std::string suite_summary_csv(const SweepSpec& spec, const SuiteResult& result);

}  // namespace shuttleswarm::harness
