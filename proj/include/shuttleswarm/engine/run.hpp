#pragma once

#include <map>
#include <optional>
#include <vector>

#include "shuttleswarm/costing/ledger.hpp"
#include "shuttleswarm/engine/event_log.hpp"
#include "shuttleswarm/harness/scenario.hpp"
#include "shuttleswarm/metrics/report.hpp"

namespace shuttleswarm::engine {

struct RunResult {
  metrics::MetricsReport report;
  EventLog events;

  struct ShuttleExport {
    ShuttleId id = -1;
    double odometer_m = 0.0;
    int lifts = 0;
    std::vector<costing::Leg> legs;
    std::map<PersonId, costing::Money> charges;
  };
  std::vector<ShuttleExport> shuttles;
};

// Full deterministic simulation of one scenario day: identical (config, seed)
// gives bit-identical reports, series and event logs.
RunResult run_scenario(const harness::ScenarioConfig& cfg,
                       std::optional<std::uint64_t> seed_override = std::nullopt);

std::string ledger_csv_text(const RunResult& result);

}  // namespace shuttleswarm::engine
