#include "shuttleswarm/engine/congestion.hpp"

namespace shuttleswarm::engine {

CongestionState update_congestion(geo::RoadGraph& graph,
                                  std::span<const EdgeId> vehicle_edges,
                                  double alpha) {
  CongestionState state;
  state.vehicle_count.assign(graph.edge_count(), 0);
  state.coefficient.assign(graph.edge_count(), 1.0);
  for (EdgeId e : vehicle_edges) {
    if (e != kNoEdge) ++state.vehicle_count[static_cast<std::size_t>(e)];
  }
  for (std::size_t i = 0; i < graph.edge_count(); ++i) {
    auto& edge = graph.edge(static_cast<EdgeId>(i));
    const int count = state.vehicle_count[i];
    const double density = static_cast<double>(count) / edge.lanes;
    state.coefficient[i] = 1.0 / (1.0 + alpha * density);
    edge.vehicle_count = count;
    edge.speed_coefficient = state.coefficient[i];
  }
  return state;
}

}  // namespace shuttleswarm::engine
