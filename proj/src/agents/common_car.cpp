#include "shuttleswarm/agents/common_car.hpp"

#include "shuttleswarm/engine/world.hpp"

namespace shuttleswarm::agents {

void step_common_car(CommonCar& c, engine::World& w) {
  if (!c.motion.en_route()) {
    // time_to_go reflex: pick a fresh random objective and route to it.
    const auto& ids = w.graph.node_ids();
    NodeId pick = c.motion.node;
    while (pick == c.motion.node) {
      pick = ids[w.rng.uniform_index(ids.size())];
    }
    c.target = pick;
    c.rerouted_edge = kNoEdge;
    engine::reroute_traveler(c.motion, w.graph, pick);
  }

  // Crawl check: below 5 km/h the driver turns away from the jammed road,
  // once per edge, keeping the same objective.
  if (c.motion.en_route()) {
    const EdgeId cur = c.motion.current_edge();
    const auto& edge = w.graph.edge(cur);
    const double eff = std::min(c.speed_ms, edge.effective_speed_ms());
    if (eff < kCrawlSpeedMs && c.rerouted_edge != cur) {
      c.rerouted_edge = cur;
      engine::reroute_traveler(c.motion, w.graph, c.target, cur);
    }
  }

  engine::advance_along_path(c.motion, w.graph, c.speed_ms,
                             static_cast<double>(w.params.step_seconds));
}

}  // namespace shuttleswarm::agents
