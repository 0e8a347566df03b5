#include "shuttleswarm/agents/shuttle.hpp"

#include <algorithm>

#include "shuttleswarm/engine/world.hpp"
#include "shuttleswarm/errors.hpp"
#include "shuttleswarm/selforg/insertion.hpp"

namespace shuttleswarm::agents {

const char* to_string(ShuttleState s) {
  switch (s) {
    case ShuttleState::wander: return "wander";
    case ShuttleState::first_stop: return "first_stop";
    case ShuttleState::moving: return "moving";
    case ShuttleState::stop: return "stop";
  }
  return "?";
}

namespace {

using engine::World;

void transition_shuttle(Shuttle& s, World& w, ShuttleState to) {
  w.events.append(w.clock, "transition",
                  {{"agent", "S" + std::to_string(s.id)},
                   {"from", to_string(s.state)},
                   {"to", to_string(to)}});
  s.state = to;
}

selforg::Candidate to_candidate(const LiftRequest& r, const World& w) {
  const Person& p = const_cast<World&>(w).person(r.person);
  selforg::Candidate c;
  c.person = r.person;
  c.origin = r.origin;
  c.destination = r.destination;
  c.issue = r.issue;
  c.to_work = r.direction == LiftRequest::Direction::to_work;
  c.work_start = p.work_start;
  return c;
}

// In wander the shuttle scans all around; while moving it only picks up
// requests on the road ahead (it does not turn back for people behind it).
std::vector<LiftRequest> visible_requests(const Shuttle& s, const World& w,
                                          bool forward_only) {
  const geo::Vec2 pos = engine::traveler_pos(s.motion, w.graph);
  geo::Vec2 heading{0.0, 0.0};
  if (forward_only && s.motion.en_route()) {
    const auto& edge = w.graph.edge(s.motion.current_edge());
    heading = w.graph.node_pos(edge.to) - pos;
  }
  const bool use_heading = forward_only && (heading.x != 0.0 || heading.y != 0.0);

  std::vector<LiftRequest> out;
  for (const auto& r : w.requests) {  // already sorted by (issue, person)
    if (s.considered.count(r.person)) continue;
    const geo::Vec2 origin_pos = w.graph.node_pos(r.origin);
    if (geo::distance(pos, origin_pos) > w.params.pickup_radius_m) continue;
    if (use_heading) {
      const geo::Vec2 toward = origin_pos - pos;
      if (heading.x * toward.x + heading.y * toward.y < 0.0) continue;
    }
    out.push_back(r);
  }
  return out;
}

void commit_person(Shuttle& s, World& w, const selforg::Candidate& c,
                   const char* kind) {
  Person& p = w.person(c.person);
  if (!p.is_searching()) {
    throw InternalError("committing person " + std::to_string(c.person) +
                        " who is not searching");
  }
  w.remove_request(c.person);
  transition_person(p, w, PersonState::wait_for_lift);
  p.committed_shuttle = s.id;
  w.events.append(w.clock, "commit",
                  {{"shuttle", std::to_string(s.id)},
                   {"person", std::to_string(c.person)},
                   {"origin", std::to_string(c.origin)},
                   {"dest", std::to_string(c.destination)},
                   {"kind", kind}});
}

double plan_leg_time(const World& w, NodeId from, NodeId to) {
  if (from == to) return 0.0;
  auto p = geo::shortest_path(w.graph, from, to);
  if (!p) throw InternalError("plan leg unreachable");
  return p->travel_time_s;
}

geo::Path plan_ride_path(const World& w, const std::vector<NodeId>& stops,
                         std::size_t start_index, NodeId destination) {
  geo::Path ride;
  NodeId at = stops[start_index];
  ride.origin = at;
  for (std::size_t k = start_index + 1; k < stops.size() && at != destination; ++k) {
    if (stops[k] == at) continue;
    auto leg = geo::shortest_path(w.graph, at, stops[k]);
    if (!leg) throw InternalError("plan ride unreachable");
    ride.edges.insert(ride.edges.end(), leg->edges.begin(), leg->edges.end());
    ride.length_m += leg->length_m;
    ride.travel_time_s += leg->travel_time_s;
    at = stops[k];
  }
  ride.destination = destination;
  return ride;
}

// Expected arrival times along the remaining plan, from the current position.
void refresh_etas(Shuttle& s, World& w) {
  if (s.next_stop >= s.stops.size()) return;
  std::vector<SimSeconds> arrival(s.stops.size(), 0);
  double t = static_cast<double>(w.clock);
  if (s.motion.en_route() || s.motion.node != s.stops[s.next_stop]) {
    geo::Path probe;
    if (s.motion.en_route()) {
      engine::Traveler copy = s.motion;
      // Remaining time of the current route re-evaluated live.
      double rem = 0.0;
      const auto& edges = copy.path.edges;
      for (std::size_t i = copy.edge_index; i < edges.size(); ++i) {
        const auto& e = w.graph.edge(edges[i]);
        double len = e.length_m;
        if (i == copy.edge_index) len -= copy.offset_m;
        rem += len / (e.free_speed_ms * e.speed_coefficient);
      }
      t += rem;
    } else {
      t += plan_leg_time(w, s.motion.node, s.stops[s.next_stop]);
    }
  }
  arrival[s.next_stop] = static_cast<SimSeconds>(t);
  for (std::size_t k = s.next_stop + 1; k < s.stops.size(); ++k) {
    t += static_cast<double>(w.params.dwell_seconds) +
         plan_leg_time(w, s.stops[k - 1], s.stops[k]);
    arrival[k] = static_cast<SimSeconds>(t);
  }

  std::vector<StopEta> kept;
  for (const auto& se : s.stop_etas) {
    if (se.actual >= 0) kept.push_back(se);
  }
  for (std::size_t k = s.next_stop; k < s.stops.size(); ++k) {
    kept.push_back({s.stops[k], arrival[k], -1});
  }
  s.stop_etas = std::move(kept);

  for (auto& pass : s.onboard) {
    for (std::size_t k = s.next_stop; k < s.stops.size(); ++k) {
      if (s.stops[k] == pass.destination) {
        pass.eta = arrival[k];
        break;
      }
    }
  }
}

void route_to_next_stop(Shuttle& s, World& w) {
  if (s.next_stop >= s.stops.size()) return;
  engine::reroute_traveler(s.motion, w.graph, s.stops[s.next_stop]);
}

void reset_episode(Shuttle& s) {
  s.stops.clear();
  s.targets.clear();
  s.visited.clear();
  s.considered.clear();
  s.stop_etas.clear();
  s.next_stop = 0;
  s.motion.clear_route();
  s.wander_target = kNoNode;
}

void depart_after_dwell(Shuttle& s, World& w) {
  if (s.state == ShuttleState::first_stop) {
    transition_shuttle(s, w, ShuttleState::moving);
    route_to_next_stop(s, w);
    refresh_etas(s, w);
    return;
  }
  if (s.state == ShuttleState::stop) {
    if (s.episode_done()) {
      transition_shuttle(s, w, ShuttleState::wander);
      reset_episode(s);
    } else {
      transition_shuttle(s, w, ShuttleState::moving);
      route_to_next_stop(s, w);
      refresh_etas(s, w);
    }
  }
}

void arrive_at_stop(Shuttle& s, World& w) {
  const NodeId node = s.stops[s.next_stop];

  std::vector<PersonId> alighted;
  for (auto it = s.onboard.begin(); it != s.onboard.end();) {
    if (it->destination == node) {
      Person& p = w.person(it->id);
      p.aboard = false;
      p.committed_shuttle = -1;
      if (it->to_work) {
        p.served_to_work = true;
      } else {
        p.served_to_home = true;
      }
      p.wait_samples_s.push_back(p.board_wait_s);
      person_arrive(p, w, node);
      alighted.push_back(it->id);
      it = s.onboard.erase(it);
    } else {
      ++it;
    }
  }

  std::vector<PersonId> boarded;
  std::stable_sort(s.pending.begin(), s.pending.end(),
                   [](const CommittedPickup& a, const CommittedPickup& b) {
                     return a.id < b.id;
                   });
  for (auto it = s.pending.begin(); it != s.pending.end();) {
    if (it->origin == node) {
      if (static_cast<int>(s.onboard.size()) >= s.capacity) {
        throw InternalError("shuttle " + std::to_string(s.id) +
                            ": boarding beyond capacity");
      }
      Person& p = w.person(it->id);
      p.aboard = true;
      p.motion.node = node;
      p.motion.clear_route();
      p.wait_deadline.reset();
      p.board_wait_s = w.clock - p.request_issue;
      transition_person(p, w, it->to_work ? PersonState::go_work : PersonState::go_home);
      BoardedPassenger bp;
      bp.id = it->id;
      bp.origin = it->origin;
      bp.destination = it->destination;
      bp.boarded_at = w.clock;
      bp.to_work = it->to_work;
      bp.work_start = it->work_start;
      bp.quoted = it->quoted;
      s.onboard.push_back(std::move(bp));
      ++s.cumulative_lifts;
      boarded.push_back(it->id);
      it = s.pending.erase(it);
    } else {
      ++it;
    }
  }

  std::sort(alighted.begin(), alighted.end());
  std::sort(boarded.begin(), boarded.end());
  s.ledger.on_stop_event(node, boarded, alighted);
  w.events.append(w.clock, "stop",
                  {{"shuttle", std::to_string(s.id)},
                   {"node", std::to_string(node)},
                   {"boarded", engine::join_ids(boarded)},
                   {"alighted", engine::join_ids(alighted)}});

  if (std::find(s.visited.begin(), s.visited.end(), node) == s.visited.end()) {
    s.visited.push_back(node);
  }
  for (auto& se : s.stop_etas) {
    if (se.node == node && se.actual < 0) {
      se.actual = w.clock;
      break;
    }
  }

  // A target is spent once nobody aboard or committed is destined to it. A
  // passenger can alight ahead of schedule when a later pickup happens to sit
  // on their destination node, so the spent target is not always the front.
  auto destined = [&](NodeId n) {
    for (const auto& bp : s.onboard) {
      if (bp.destination == n) return true;
    }
    for (const auto& cp : s.pending) {
      if (cp.destination == n) return true;
    }
    return false;
  };
  if (auto it = std::find(s.targets.begin(), s.targets.end(), node);
      it != s.targets.end() && !destined(node)) {
    s.targets.erase(it);
  }

  ++s.next_stop;
  // Skip upcoming stops that lost their purpose (their passengers already
  // alighted early or their target got spent).
  while (s.next_stop < s.stops.size()) {
    const NodeId upcoming = s.stops[s.next_stop];
    const bool is_pickup = std::any_of(s.pending.begin(), s.pending.end(),
                                       [&](const CommittedPickup& cp) {
                                         return cp.origin == upcoming;
                                       });
    const bool is_target = std::find(s.targets.begin(), s.targets.end(),
                                     upcoming) != s.targets.end();
    if (is_pickup || is_target) break;
    ++s.next_stop;
  }

  if (s.state == ShuttleState::moving) {
    transition_shuttle(s, w, ShuttleState::stop);
  }
  s.dwell_left = w.dwell_ticks();
  if (s.dwell_left == 0) depart_after_dwell(s, w);
}

void advance_to_next_stop(Shuttle& s, World& w) {
  if (s.next_stop >= s.stops.size()) {
    throw InternalError("shuttle " + std::to_string(s.id) + " moving with no stops");
  }
  const NodeId target = s.stops[s.next_stop];
  if (!s.motion.en_route()) {
    if (s.motion.node == target) {
      arrive_at_stop(s, w);
      return;
    }
    route_to_next_stop(s, w);
  } else if (s.motion.path.destination != target) {
    route_to_next_stop(s, w);
  }
  const auto res = engine::advance_along_path(
      s.motion, w.graph, s.speed_ms, static_cast<double>(w.params.step_seconds),
      target);
  s.odometer_m += res.moved_m;
  s.ledger.add_distance(res.moved_m);
  if ((res.arrived || res.halted) && s.motion.node == target) {
    arrive_at_stop(s, w);
  }
}

// Undirected roaming is a local random walk over adjacent intersections: an
// idle fleet disperses by diffusion instead of beelining across the city.
void wander_move(Shuttle& s, World& w) {
  if (!s.motion.en_route()) {
    const auto out = w.graph.out_edges(s.motion.node);
    const EdgeId pick = out[w.rng.uniform_index(out.size())];
    s.wander_target = w.graph.edge(pick).to;
    geo::Path leg;
    leg.origin = s.motion.node;
    leg.destination = s.wander_target;
    leg.edges = {pick};
    leg.length_m = w.graph.edge(pick).length_m;
    leg.travel_time_s = w.graph.edge_travel_time(pick);
    s.motion.set_route(std::move(leg));
  }
  const auto res = engine::advance_along_path(
      s.motion, w.graph, s.speed_ms, static_cast<double>(w.params.step_seconds));
  s.odometer_m += res.moved_m;
  s.ledger.add_distance(res.moved_m);
}

// Wander-state scan: the first origin with pending requests in radius seeds
// the service episode.
bool scan_and_form_group(Shuttle& s, World& w) {
  const auto visible = visible_requests(s, w, /*forward_only=*/false);
  if (visible.empty()) return false;

  const NodeId origin = visible.front().origin;
  std::vector<selforg::Candidate> batch;
  for (const auto& r : visible) {
    if (r.origin == origin) batch.push_back(to_candidate(r, w));
  }

  auto group = selforg::form_initial_group(w.graph, origin, batch, s.open_seats());

  for (const auto& rej : group.rejected) {
    s.considered.insert(rej.candidate.person);
    w.events.append(w.clock, "reject",
                    {{"shuttle", std::to_string(s.id)},
                     {"person", std::to_string(rej.candidate.person)},
                     {"dest", std::to_string(rej.candidate.destination)},
                     {"reason", to_string(rej.reason)}});
  }

  s.stops.clear();
  s.stops.push_back(origin);
  s.stops.insert(s.stops.end(), group.targets.begin(), group.targets.end());
  s.targets = group.targets;
  s.next_stop = 0;
  s.visited.clear();

  for (std::size_t i = 0; i < group.members.size(); ++i) {
    const auto& m = group.members[i];
    commit_person(s, w, m, "initial");
    CommittedPickup pick;
    pick.id = m.person;
    pick.origin = m.origin;
    pick.destination = m.destination;
    pick.committed_at = w.clock;
    pick.to_work = m.to_work;
    pick.work_start = m.work_start;
    pick.quoted = group.member_rides[i];
    s.pending.push_back(std::move(pick));
  }

  transition_shuttle(s, w, ShuttleState::first_stop);
  route_to_next_stop(s, w);
  refresh_etas(s, w);
  return true;
}

selforg::ShuttleSnapshot make_snapshot(const Shuttle& s, const World& w) {
  selforg::ShuttleSnapshot snap;
  snap.position = engine::traveler_pos(s.motion, w.graph);
  snap.targets = s.targets;
  snap.stops = s.stops;
  snap.next_stop = s.next_stop;
  snap.visited = s.visited;
  snap.open_seats = s.open_seats();
  if (!s.onboard.empty()) {
    const auto& first = s.onboard.front();
    snap.first_work_bound = first.to_work;
    snap.av_time_s = static_cast<double>(first.work_start - w.clock);
    snap.original = first.quoted;
  }
  return snap;
}

void log_admission(const Shuttle& s, World& w, const selforg::ShuttleSnapshot& snap,
                   NodeId new_origin, const selforg::AdmissionDecision& d) {
  const geo::Vec2 fpos = w.graph.node_pos(snap.targets.back());
  auto geometry = [&](NodeId dest) {
    const geo::Vec2 dpos = w.graph.node_pos(dest);
    return std::vector<std::pair<std::string, std::string>>{
        {"sx", engine::fmt_double(snap.position.x)},
        {"sy", engine::fmt_double(snap.position.y)},
        {"fx", engine::fmt_double(fpos.x)},
        {"fy", engine::fmt_double(fpos.y)},
        {"dx", engine::fmt_double(dpos.x)},
        {"dy", engine::fmt_double(dpos.y)}};
  };

  for (const auto& a : d.admitted) {
    std::vector<std::pair<std::string, std::string>> fields = {
        {"shuttle", std::to_string(s.id)},
        {"person", std::to_string(a.candidate.person)},
        {"origin", std::to_string(new_origin)},
        {"dest", std::to_string(a.candidate.destination)},
        {"index", std::to_string(a.splice_index)},
        {"as_last", a.as_last ? "1" : "0"},
        {"direct", a.direct ? "1" : "0"},
        {"angle", engine::fmt_double(a.angle_deg)},
        {"guard", a.guard_checked ? "1" : "0"},
    };
    if (a.guard_checked) {
      fields.push_back({"change", engine::fmt_double(a.change_s)});
      fields.push_back({"avtime", engine::fmt_double(a.av_time_s)});
      fields.push_back({"ta_orig", engine::fmt_double(a.t_a_original_s)});
    }
    for (auto& g : geometry(a.candidate.destination)) fields.push_back(std::move(g));
    w.events.append(w.clock, "admit", std::move(fields));
  }
  for (const auto& r : d.rejected) {
    std::vector<std::pair<std::string, std::string>> fields = {
        {"shuttle", std::to_string(s.id)},
        {"person", std::to_string(r.candidate.person)},
        {"dest", std::to_string(r.candidate.destination)},
        {"reason", to_string(r.reason)},
        {"angle", engine::fmt_double(r.angle_deg)},
    };
    for (auto& g : geometry(r.candidate.destination)) fields.push_back(std::move(g));
    w.events.append(w.clock, "reject", std::move(fields));
  }
  w.events.append(
      w.clock, "admit_counter",
      {{"shuttle", std::to_string(s.id)},
       {"n", std::to_string(d.counter.candidates)},
       {"m", std::to_string(d.counter.max_positions)},
       {"ops", std::to_string(d.counter.ops)}});
}

void scan_and_try_admit(Shuttle& s, World& w) {
  if (s.open_seats() == 0) return;
  const auto visible = visible_requests(s, w, /*forward_only=*/true);
  if (visible.empty()) return;

  // One admission pass per distinct origin, in first-appearance order.
  std::vector<NodeId> origins;
  for (const auto& r : visible) {
    if (std::find(origins.begin(), origins.end(), r.origin) == origins.end()) {
      origins.push_back(r.origin);
    }
  }
  for (NodeId origin : origins) {
    if (s.open_seats() == 0) break;
    std::vector<selforg::Candidate> batch;
    for (const auto& r : visible) {
      if (r.origin == origin && !s.considered.count(r.person) &&
          w.has_request(r.person)) {
        batch.push_back(to_candidate(r, w));
      }
    }
    if (batch.empty()) continue;

    const auto snap = make_snapshot(s, w);
    auto decision = selforg::try_admit(w.graph, snap, batch, origin,
                                       w.params.angle_threshold_deg);
    s.targets = decision.targets;
    s.stops = decision.stops;

    for (const auto& a : decision.admitted) {
      commit_person(s, w, a.candidate, "insert");
      CommittedPickup pick;
      pick.id = a.candidate.person;
      pick.origin = origin;
      pick.destination = a.candidate.destination;
      pick.committed_at = w.clock;
      pick.to_work = a.candidate.to_work;
      pick.work_start = a.candidate.work_start;
      pick.quoted = plan_ride_path(w, s.stops, s.next_stop, a.candidate.destination);
      s.pending.push_back(std::move(pick));
      s.considered.insert(a.candidate.person);
    }
    for (const auto& r : decision.rejected) {
      s.considered.insert(r.candidate.person);
    }
    log_admission(s, w, snap, origin, decision);

    if (!decision.admitted.empty()) {
      route_to_next_stop(s, w);
      refresh_etas(s, w);
    }
  }
}

}  // namespace

void step_shuttle(Shuttle& s, engine::World& w) {
  if (s.dwell_left > 0) {
    --s.dwell_left;
    if (s.dwell_left == 0) depart_after_dwell(s, w);
    return;
  }
  switch (s.state) {
    case ShuttleState::wander:
      if (scan_and_form_group(s, w)) return;
      wander_move(s, w);
      break;
    case ShuttleState::moving:
      scan_and_try_admit(s, w);
      advance_to_next_stop(s, w);
      break;
    case ShuttleState::first_stop:
      advance_to_next_stop(s, w);
      break;
    case ShuttleState::stop:
      throw InternalError("shuttle in stop state outside a dwell");
  }
}

}  // namespace shuttleswarm::agents
