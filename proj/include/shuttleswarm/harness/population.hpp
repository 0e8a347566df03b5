#pragma once

#include <vector>

#include "shuttleswarm/agents/common_car.hpp"
#include "shuttleswarm/agents/person.hpp"
#include "shuttleswarm/engine/rng.hpp"
#include "shuttleswarm/geo/city.hpp"
#include "shuttleswarm/geo/road_graph.hpp"
#include "shuttleswarm/harness/scenario.hpp"

namespace shuttleswarm::harness {

struct Population {
  std::vector<agents::Person> persons;
  std::vector<agents::CommonCar> cars;
};

// Homes are sampled uniformly from residential buildings, workplaces by the
// workplace mode; work start times are uniform whole minutes in the window.
// Throws ConfigError when the city lacks the buildings the mode requires.
Population build_population(const ScenarioConfig& cfg, const geo::CityModel& city,
                            const geo::RoadGraph& graph, engine::SeededRng& rng);

}  // namespace shuttleswarm::harness
