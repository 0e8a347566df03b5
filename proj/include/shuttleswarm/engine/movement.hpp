#pragma once

#include <vector>

#include "shuttleswarm/geo/road_graph.hpp"

namespace shuttleswarm::engine {

// Position of an agent bound to the road graph: either parked at a node or
// part-way along an edge of its current path.
struct Traveler {
  NodeId node = kNoNode;  // current/last node; authoritative when !en_route()
  geo::Path path;
  std::size_t edge_index = 0;  // edge of `path` being traversed
  double offset_m = 0.0;       // progress along that edge

  bool en_route() const { return edge_index < path.edges.size(); }
  EdgeId current_edge() const {
    return en_route() ? path.edges[edge_index] : kNoEdge;
  }
  void set_route(geo::Path p) {
    node = p.origin;
    path = std::move(p);
    edge_index = 0;
    offset_m = 0.0;
    if (!en_route()) node = path.destination;
  }
  void clear_route() {
    path = geo::Path{};
    edge_index = 0;
    offset_m = 0.0;
  }
};

geo::Vec2 traveler_pos(const Traveler& t, const geo::RoadGraph& g);

struct AdvanceResult {
  double moved_m = 0.0;
  std::vector<NodeId> crossed;  // node arrivals in order, including the last
  bool arrived = false;         // reached the path destination
  bool halted = false;          // stopped early at halt_at
};

// Moves up to dt_s seconds along the traveler's path. The effective speed on
// each edge is min(agent_speed, free_flow * speed_coefficient), re-evaluated
// per edge as edges are crossed. Movement ends early at halt_at (a scheduled
// stop); the residual time is discarded. Overshoot past the final node clamps
// there.
AdvanceResult advance_along_path(Traveler& t, const geo::RoadGraph& g,
                                 double agent_speed_ms, double dt_s,
                                 NodeId halt_at = kNoNode);

// Route for an agent that may be mid-edge: finishes the current edge first,
// then follows the shortest path from its head. Returns false if target is
// unreachable under the ban (caller keeps its old route).
bool reroute_traveler(Traveler& t, const geo::RoadGraph& g, NodeId target,
                      EdgeId banned = kNoEdge);

}  // namespace shuttleswarm::engine
