#include "shuttleswarm/engine/movement.hpp"

#include <algorithm>

#include "shuttleswarm/errors.hpp"

namespace shuttleswarm::engine {

geo::Vec2 traveler_pos(const Traveler& t, const geo::RoadGraph& g) {
  if (t.en_route()) return g.point_along(t.current_edge(), t.offset_m);
  return g.node_pos(t.node);
}

AdvanceResult advance_along_path(Traveler& t, const geo::RoadGraph& g,
                                 double agent_speed_ms, double dt_s,
                                 NodeId halt_at) {
  AdvanceResult res;
  if (dt_s <= 0.0 || agent_speed_ms < 0.0) {
    throw DomainError("advance_along_path: need dt > 0 and speed >= 0");
  }
  double dt_left = dt_s;
  while (dt_left > 0.0 && t.en_route()) {
    const geo::Edge& e = g.edge(t.current_edge());
    const double eff = std::min(agent_speed_ms, e.effective_speed_ms());
    if (eff <= 0.0) break;
    const double to_end = e.length_m - t.offset_m;
    const double reach = eff * dt_left;
    if (reach < to_end) {
      t.offset_m += reach;
      res.moved_m += reach;
      dt_left = 0.0;
    } else {
      res.moved_m += to_end;
      dt_left -= to_end / eff;
      t.offset_m = 0.0;
      t.node = e.to;
      ++t.edge_index;
      res.crossed.push_back(e.to);
      if (!t.en_route()) {
        res.arrived = true;
        break;
      }
      if (e.to == halt_at) {
        res.halted = true;
        break;
      }
    }
  }
  if (!t.en_route() && t.path.destination != kNoNode) {
    t.node = t.path.destination;
  }
  return res;
}

bool reroute_traveler(Traveler& t, const geo::RoadGraph& g, NodeId target,
                      EdgeId banned) {
  if (!t.en_route()) {
    auto p = banned == kNoEdge ? geo::shortest_path(g, t.node, target)
                               : geo::shortest_path_avoiding(g, t.node, target, banned);
    if (!p) return false;
    t.set_route(std::move(*p));
    return true;
  }
  // Mid-edge: commit to finishing the current edge, then take the best route
  // from its head (no U-turns inside an edge).
  const EdgeId cur = t.current_edge();
  const geo::Edge& e = g.edge(cur);
  auto tail = banned == kNoEdge ? geo::shortest_path(g, e.to, target)
                                : geo::shortest_path_avoiding(g, e.to, target, banned);
  if (!tail) return false;
  geo::Path p;
  p.origin = e.from;
  p.destination = target;
  p.edges.push_back(cur);
  p.edges.insert(p.edges.end(), tail->edges.begin(), tail->edges.end());
  p.length_m = e.length_m + tail->length_m;
  p.travel_time_s = g.edge_travel_time(cur) + tail->travel_time_s;
  const double keep_offset = t.offset_m;
  t.path = std::move(p);
  t.edge_index = 0;
  t.offset_m = keep_offset;
  return true;
}

}  // namespace shuttleswarm::engine
