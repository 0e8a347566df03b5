#pragma once

#include <span>
#include <vector>

#include "shuttleswarm/geo/road_graph.hpp"

namespace shuttleswarm::engine {

struct CongestionState {
  std::vector<int> vehicle_count;    // per edge id
  std::vector<double> coefficient;   // per edge id
};

// Per edge: coefficient = 1 / (1 + alpha * vehicles / lanes). Writes the new
// state into the graph and returns it. vehicle_edges lists the edge each
// vehicle currently occupies (kNoEdge entries are parked agents and ignored).
CongestionState update_congestion(geo::RoadGraph& graph,
                                  std::span<const EdgeId> vehicle_edges,
                                  double alpha);

}  // namespace shuttleswarm::engine
