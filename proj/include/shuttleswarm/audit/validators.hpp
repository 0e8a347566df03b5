#pragma once

#include <string>
#include <vector>

#include "shuttleswarm/engine/event_log.hpp"

namespace shuttleswarm::audit {

struct Violation {
  std::string check;   // fsm | seats | angle | visited_stop | lateness_guard |
                       // leg_cost | conservation | odometer | double_entry
  std::string detail;
};

// Replays the event log: FSM conformance against the allowed transition sets,
// seat-cap tracking from stop events, and per-admission angle / visited-stop
// / lateness-guard soundness recomputed from the logged geometry.
std::vector<Violation> validate_events(const engine::EventLog& log,
                                       double angle_threshold_deg,
                                       int capacity = 12);

// Recomputes every leg cost and fare split from the ledger export and checks
// them against the report: exact conservation, gain, and odometer agreement.
std::vector<Violation> validate_ledger(const std::string& ledger_csv,
                                       const std::string& report_json,
                                       double cost_per_km);

// Cross-checks events against the report (served-user double entry).
std::vector<Violation> validate_cross(const engine::EventLog& log,
                                      const std::string& report_json);

// Loads config.json, report.json, ledger.csv and events.log from a run
// directory and runs every validator. Throws ParseError when a file is
// missing or unreadable.
std::vector<Violation> validate_run_dir(const std::string& dir);

}  // namespace shuttleswarm::audit
