#pragma once

#include <vector>

#include "shuttleswarm/agents/common_car.hpp"
#include "shuttleswarm/agents/lift_request.hpp"
#include "shuttleswarm/agents/person.hpp"
#include "shuttleswarm/agents/shuttle.hpp"
#include "shuttleswarm/costing/money.hpp"
#include "shuttleswarm/engine/event_log.hpp"
#include "shuttleswarm/engine/rng.hpp"
#include "shuttleswarm/geo/road_graph.hpp"

namespace shuttleswarm::metrics {
class Collector;
}

namespace shuttleswarm::engine {

struct WorldParams {
  SimSeconds step_seconds = 1;
  SimSeconds start_time = 21600;  // 06:00
  SimSeconds wait_timeout = 600;
  SimSeconds lookahead = 1800;
  double pickup_radius_m = 300.0;
  double angle_threshold_deg = 20.0;
  SimSeconds dwell_seconds = 10;
  double congestion_alpha = 0.25;
  std::int64_t max_ticks = 86400;
  costing::Money cost_per_km = costing::Money::from_units(1.0);
  int shuttle_capacity = 12;
};

struct World {
  geo::RoadGraph graph;
  WorldParams params;
  std::vector<agents::Person> persons;     // ascending id
  std::vector<agents::Shuttle> shuttles;   // ascending id
  std::vector<agents::CommonCar> cars;     // ascending id
  std::vector<agents::LiftRequest> requests;  // sorted by (issue, person)
  SeededRng rng;
  EventLog events;
  Tick tick = 0;
  SimSeconds clock = 0;

  explicit World(std::uint64_t seed) : rng(seed) {}

  agents::Person& person(PersonId id);
  int dwell_ticks() const {
    const SimSeconds s = params.step_seconds;
    return static_cast<int>((params.dwell_seconds + s - 1) / s);
  }

  void post_request(const agents::LiftRequest& r);
  void remove_request(PersonId person);
  bool has_request(PersonId person) const;
};

// One tick: (1) expire lift requests, (2) persons in id order, (3) shuttles,
// (4) common cars, (5) congestion update, (6) metrics collection. The clock
// advances exactly one step.
void step(World& w, metrics::Collector* collector);

// True when every person has finished the daily cycle.
bool all_persons_done(const World& w);

}  // namespace shuttleswarm::engine
