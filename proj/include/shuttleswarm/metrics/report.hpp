#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shuttleswarm/costing/money.hpp"
#include "shuttleswarm/ids.hpp"

namespace shuttleswarm::engine {
struct World;
}

namespace shuttleswarm::metrics {

struct SampledSeries {
  SimSeconds interval = 60;
  // (time, value) with strictly increasing times; the last sample equals the
  // end-of-run counter.
  std::vector<std::pair<SimSeconds, long>> served;
  std::vector<std::pair<SimSeconds, long>> shuttles_in_use;
  std::vector<std::pair<SimSeconds, long>> late;
};

struct PerShuttle {
  ShuttleId id = -1;
  double odometer_km = 0.0;
  int lifts = 0;
  costing::Money billed;
};

struct MetricsReport {
  int users_total = 0;
  int users_served = 0;
  int served_late_count = 0;

  // Raw sums; displayed averages derive from these with exact rounding.
  long wait_samples = 0;
  SimSeconds wait_total_s = 0;
  SimSeconds late_total_s = 0;

  // Charges of served users, ascending person id. Exact.
  std::vector<std::pair<PersonId, costing::Money>> cost_distribution;
  costing::Money total_gain;

  std::optional<double> lifts_avg;
  int lifts_min = 0;
  int lifts_max = 0;
  std::vector<PerShuttle> per_shuttle;
  std::optional<double> avg_km_per_shuttle;

  bool incomplete = false;
  SampledSeries series;

  std::optional<double> avg_waiting_minutes() const;
  std::optional<double> avg_late_minutes() const;
  std::optional<double> avg_travel_cost() const;  // 2dp half-even, currency
  double served_pct() const;
};

// Engine hook, called once per tick at phase 6; samples the tracked series at
// the configured interval.
class Collector {
 public:
  explicit Collector(SimSeconds interval) : interval_(interval) {}

  void collect(const engine::World& w);
  MetricsReport summarize(const engine::World& w, bool incomplete) const;

 private:
  SimSeconds interval_;
  SimSeconds next_sample_ = -1;
  SampledSeries series_;
};

std::string report_json_text(const MetricsReport& r);
std::string report_csv_text(const MetricsReport& r);
std::string series_csv_text(const MetricsReport& r);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace shuttleswarm::metrics
