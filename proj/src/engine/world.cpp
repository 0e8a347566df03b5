#include "shuttleswarm/engine/world.hpp"

#include <algorithm>

#include "shuttleswarm/engine/congestion.hpp"
#include "shuttleswarm/errors.hpp"
#include "shuttleswarm/metrics/report.hpp"

namespace shuttleswarm::engine {

agents::Person& World::person(PersonId id) {
  const auto idx = static_cast<std::size_t>(id);
  if (idx >= persons.size() || persons[idx].id != id) {
    throw InternalError("unknown person id " + std::to_string(id));
  }
  return persons[idx];
}

void World::post_request(const agents::LiftRequest& r) {
  auto at = std::upper_bound(requests.begin(), requests.end(), r,
                             [](const agents::LiftRequest& a, const agents::LiftRequest& b) {
                               if (a.issue != b.issue) return a.issue < b.issue;
                               return a.person < b.person;
                             });
  requests.insert(at, r);
}

void World::remove_request(PersonId person) {
  std::erase_if(requests, [&](const agents::LiftRequest& r) { return r.person == person; });
}

bool World::has_request(PersonId person) const {
  return std::any_of(requests.begin(), requests.end(),
                     [&](const agents::LiftRequest& r) { return r.person == person; });
}

void step(World& w, metrics::Collector* collector) {
  // (1) expired requests leave the pool; the owners transition in phase 2.
  std::erase_if(w.requests,
                [&](const agents::LiftRequest& r) { return r.expiry <= w.clock; });

  // (2)-(4) agents in id order.
  for (auto& p : w.persons) agents::step_person(p, w);
  for (auto& s : w.shuttles) agents::step_shuttle(s, w);
  for (auto& c : w.cars) agents::step_common_car(c, w);

  // (5) densities seen by tick t+1 come from tick t's positions.
  std::vector<EdgeId> occupied;
  occupied.reserve(w.shuttles.size() + w.cars.size() + w.persons.size());
  for (const auto& s : w.shuttles) occupied.push_back(s.motion.current_edge());
  for (const auto& c : w.cars) occupied.push_back(c.motion.current_edge());
  for (const auto& p : w.persons) {
    if (!p.aboard && (p.state == agents::PersonState::go_work ||
                      p.state == agents::PersonState::go_home)) {
      occupied.push_back(p.motion.current_edge());
    }
  }
  update_congestion(w.graph, occupied, w.params.congestion_alpha);

  // (6)
  if (collector) collector->collect(w);

  ++w.tick;
  w.clock += w.params.step_seconds;
}

bool all_persons_done(const World& w) {
  return std::all_of(w.persons.begin(), w.persons.end(),
                     [](const agents::Person& p) { return p.cycle_complete; });
}

}  // namespace shuttleswarm::engine
