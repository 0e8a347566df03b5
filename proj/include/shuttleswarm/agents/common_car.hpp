#pragma once

#include "shuttleswarm/engine/movement.hpp"
#include "shuttleswarm/ids.hpp"

namespace shuttleswarm::engine {
struct World;
}

namespace shuttleswarm::agents {

// Background traffic: wanders between random nodes all day and turns away
// from roads where it has slowed below 5 km/h.
struct CommonCar {
  CarId id = -1;
  double speed_ms = 13.8889;
  engine::Traveler motion;
  NodeId target = kNoNode;
  EdgeId rerouted_edge = kNoEdge;  // escape attempted on this edge already
};

inline constexpr double kCrawlSpeedMs = 1.389;  // 5 km/h

void step_common_car(CommonCar& c, engine::World& w);

}  // namespace shuttleswarm::agents
