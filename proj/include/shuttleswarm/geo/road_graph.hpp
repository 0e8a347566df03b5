#pragma once

#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "shuttleswarm/geo/city.hpp"

namespace shuttleswarm::geo {

struct Edge {
  NodeId from = kNoNode;
  NodeId to = kNoNode;
  double length_m = 0.0;
  double free_speed_ms = 0.0;
  int lanes = 1;
  // Traffic state, mutated only by the engine between agent steps.
  double speed_coefficient = 1.0;  // in (0, 1], 1 at zero density
  int vehicle_count = 0;
  std::vector<Vec2> polyline;  // oriented from -> to

  double effective_speed_ms() const { return free_speed_ms * speed_coefficient; }
};

struct Path {
  NodeId origin = kNoNode;
  NodeId destination = kNoNode;
  std::vector<EdgeId> edges;
  double length_m = 0.0;
  // Estimated travel time at the moment the path was computed; congestion
  // changes make this stale. path_travel_time re-evaluates it live.
  double travel_time_s = 0.0;

  bool empty() const { return edges.empty(); }
};

// Directed road graph over the largest strongly connected component of the
// city. Topology is immutable after build; only per-edge traffic state moves.
class RoadGraph {
 public:
  const std::vector<NodeId>& node_ids() const { return ids_; }
  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  bool has_node(NodeId id) const { return index_.count(id) > 0; }
  Vec2 node_pos(NodeId id) const { return pos_[checked_index(id)]; }
  std::span<const EdgeId> out_edges(NodeId id) const {
    const auto& v = out_[checked_index(id)];
    return {v.data(), v.size()};
  }
  std::span<const EdgeId> in_edges(NodeId id) const {
    const auto& v = in_[checked_index(id)];
    return {v.data(), v.size()};
  }
  Edge& edge(EdgeId e) { return edges_[static_cast<std::size_t>(e)]; }
  const Edge& edge(EdgeId e) const { return edges_[static_cast<std::size_t>(e)]; }

  double edge_travel_time(EdgeId e) const {
    const Edge& ed = edges_[static_cast<std::size_t>(e)];
    return ed.length_m / (ed.free_speed_ms * ed.speed_coefficient);
  }

  // Coordinates offset_m meters along the edge polyline from its tail.
  Vec2 point_along(EdgeId e, double offset_m) const;

  // Nearest node by Euclidean distance; ties go to the lowest id.
  NodeId nearest_node(Vec2 p) const;

  friend RoadGraph build_road_graph(const CityModel& city);

 private:
  std::size_t checked_index(NodeId id) const;

  std::vector<NodeId> ids_;  // ascending
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<Vec2> pos_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;  // sorted by (head id, edge id)
  std::vector<std::vector<EdgeId>> in_;
};

// One directed edge per direction of travel (oneway roads give a single
// edge), restricted to the largest strongly connected component. Throws
// DomainError when that component has fewer than 2 nodes.
RoadGraph build_road_graph(const CityModel& city);

// Minimum-travel-time path under the current speed coefficients. Among
// equal-time paths the lexicographically smallest node sequence wins (the
// smallest feasible next node id at every hop). from == to gives the empty
// path. Returns nullopt only if to is unreachable, which cannot happen inside
// the strongly connected component. Throws DomainError for unknown nodes.
std::optional<Path> shortest_path(const RoadGraph& graph, NodeId from, NodeId to);

// Same, with one edge banned; used by vehicles escaping a congested road.
std::optional<Path> shortest_path_avoiding(const RoadGraph& graph, NodeId from,
                                           NodeId to, EdgeId banned);

// Live re-evaluation of a path's travel time under current coefficients.
double path_travel_time(const Path& path, const RoadGraph& graph);

}  // namespace shuttleswarm::geo
