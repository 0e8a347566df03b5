#include "shuttleswarm/agents/person.hpp"

#include "shuttleswarm/engine/world.hpp"
#include "shuttleswarm/errors.hpp"

namespace shuttleswarm::agents {

const char* to_string(PersonState s) {
  switch (s) {
    case PersonState::resting: return "resting";
    case PersonState::search_lift_to_work: return "search_lift_to_work";
    case PersonState::wait_for_lift: return "wait_for_lift";
    case PersonState::go_work: return "go_work";
    case PersonState::working: return "working";
    case PersonState::search_lift_to_home: return "search_lift_to_home";
    case PersonState::go_home: return "go_home";
  }
  return "?";
}

void transition_person(Person& p, engine::World& w, PersonState to) {
  w.events.append(w.clock, "transition",
                  {{"agent", "P" + std::to_string(p.id)},
                   {"from", to_string(p.state)},
                   {"to", to_string(to)}});
  p.state = to;
}

void person_search_path(Person& p, NodeId target, const geo::RoadGraph& graph) {
  auto path = geo::shortest_path(graph, p.current_node(), target);
  if (!path) {
    throw InternalError("person " + std::to_string(p.id) +
                        ": target unreachable inside the component");
  }
  p.stats.time_to_cover = path->travel_time_s;
  p.stats.distance_to_cover = path->length_m;
  p.motion.set_route(std::move(*path));
}

namespace {

void begin_search(Person& p, engine::World& w, LiftRequest::Direction dir) {
  const NodeId origin = p.current_node();
  const NodeId dest = dir == LiftRequest::Direction::to_work ? p.working_place
                                                             : p.living_place;
  LiftRequest req;
  req.person = p.id;
  req.origin = origin;
  req.destination = dest;
  req.issue = w.clock;
  req.expiry = w.clock + w.params.wait_timeout;
  req.direction = dir;
  w.post_request(req);

  p.request_issue = w.clock;
  p.wait_deadline = req.expiry;
  p.nearby_intersections.clear();
  const geo::Vec2 here = w.graph.node_pos(origin);
  for (NodeId n : w.graph.node_ids()) {
    if (geo::distance(here, w.graph.node_pos(n)) <= w.params.pickup_radius_m) {
      p.nearby_intersections.push_back(n);
    }
  }
  person_search_path(p, dest, w.graph);
  p.motion.clear_route();  // route is a quote until the search resolves

  w.events.append(w.clock, "request",
                  {{"person", std::to_string(p.id)},
                   {"origin", std::to_string(origin)},
                   {"dest", std::to_string(dest)},
                   {"expiry", std::to_string(req.expiry)},
                   {"dir", to_string(dir)}});
}

void depart_solo(Person& p, engine::World& w, NodeId dest) {
  person_search_path(p, dest, w.graph);  // fresh route under current traffic
  p.wait_deadline.reset();
  p.committed_shuttle = -1;
}

}  // namespace

void person_arrive(Person& p, engine::World& w, NodeId node) {
  p.motion.node = node;
  p.motion.clear_route();
  if (p.state == PersonState::go_work && node == p.working_place) {
    p.stats.actual_time_in = w.clock;
    p.stats.late = w.clock > p.work_start;
    transition_person(p, w, PersonState::working);
  } else if (p.state == PersonState::go_home && node == p.living_place) {
    transition_person(p, w, PersonState::resting);
    p.cycle_complete = true;
  }
}

void step_person(Person& p, engine::World& w) {
  const SimSeconds now = w.clock;
  switch (p.state) {
    case PersonState::resting:
      if (!p.morning_search_done && !p.cycle_complete &&
          now >= p.work_start - w.params.lookahead) {
        p.morning_search_done = true;
        transition_person(p, w, PersonState::search_lift_to_work);
        begin_search(p, w, LiftRequest::Direction::to_work);
      }
      break;
    case PersonState::search_lift_to_work:
      if (p.wait_deadline && now >= *p.wait_deadline) {
        transition_person(p, w, PersonState::go_work);
        depart_solo(p, w, p.working_place);
      }
      break;
    case PersonState::search_lift_to_home:
      if (p.wait_deadline && now >= *p.wait_deadline) {
        transition_person(p, w, PersonState::go_home);
        depart_solo(p, w, p.living_place);
      }
      break;
    case PersonState::wait_for_lift:
      break;  // stationary; the committed shuttle boards them at its stop
    case PersonState::go_work:
    case PersonState::go_home: {
      if (p.aboard) break;  // the shuttle carries them
      if (!p.motion.en_route()) {
        person_arrive(p, w, p.motion.node);
        break;
      }
      const NodeId dest = p.state == PersonState::go_work ? p.working_place
                                                          : p.living_place;
      const auto res = engine::advance_along_path(
          p.motion, w.graph, p.speed_ms, static_cast<double>(w.params.step_seconds),
          dest);
      p.stats.dist_covered_alone += res.moved_m;
      if (res.arrived || (res.halted && p.motion.node == dest)) {
        person_arrive(p, w, dest);
      }
      break;
    }
    case PersonState::working:
      if (now >= p.work_end && !p.evening_search_done) {
        p.evening_search_done = true;
        transition_person(p, w, PersonState::search_lift_to_home);
        begin_search(p, w, LiftRequest::Direction::to_home);
      }
      break;
  }
}

}  // namespace shuttleswarm::agents
