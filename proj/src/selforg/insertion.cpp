#include "shuttleswarm/selforg/insertion.hpp"

#include <algorithm>

#include "shuttleswarm/errors.hpp"
#include "shuttleswarm/geo/geometry.hpp"

namespace shuttleswarm::selforg {

const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::angle: return "angle";
    case RejectReason::visited_stop: return "visited_stop";
    case RejectReason::no_seats: return "no_seats";
    case RejectReason::lateness_guard: return "lateness_guard";
  }
  return "?";
}

namespace {

geo::Path must_path(const geo::RoadGraph& g, NodeId from, NodeId to) {
  auto p = geo::shortest_path(g, from, to);
  if (!p) {
    throw InternalError("no path " + std::to_string(from) + "->" + std::to_string(to) +
                        " inside the connected component");
  }
  return std::move(*p);
}

void sort_by_issue(std::vector<Candidate>& cs) {
  std::stable_sort(cs.begin(), cs.end(), [](const Candidate& a, const Candidate& b) {
    if (a.issue != b.issue) return a.issue < b.issue;
    return a.person < b.person;
  });
}

geo::Path concat_paths(const geo::RoadGraph& g, const std::vector<geo::Path>& legs) {
  geo::Path out;
  if (legs.empty()) return out;
  out.origin = legs.front().origin;
  out.destination = legs.back().destination;
  for (const auto& leg : legs) {
    out.edges.insert(out.edges.end(), leg.edges.begin(), leg.edges.end());
    out.length_m += leg.length_m;
    out.travel_time_s += geo::path_travel_time(leg, g);
  }
  return out;
}

// Positional scan used at group formation: first position whose detour length
// wins, with the final target pinned as the terminal element (a destination
// that fails every position goes immediately before it).
std::size_t formation_scan(const geo::RoadGraph& g, NodeId origin,
                           const std::vector<NodeId>& targets, NodeId d) {
  for (std::size_t i = 1; i <= targets.size(); ++i) {
    const NodeId prev = (i == 1) ? origin : targets[i - 2];
    const auto t2d = must_path(g, prev, d);
    const auto t2n = must_path(g, prev, targets[i - 1]);
    if (t2d.length_m < t2n.length_m) return i;
  }
  return targets.size();  // pinned: just before the final target
}

}  // namespace

InitialGroup form_initial_group(const geo::RoadGraph& graph, NodeId origin,
                                std::vector<Candidate> requests, int capacity) {
  if (requests.empty()) {
    throw DomainError("form_initial_group: empty request list");
  }
  sort_by_issue(requests);

  InitialGroup out;
  out.origin = origin;
  for (const auto& c : requests) {
    if (static_cast<int>(out.members.size()) < capacity) {
      out.members.push_back(c);
    } else {
      out.rejected.push_back({c, RejectReason::no_seats, -1.0});
    }
  }

  // Final objective: the member destination farthest away in travel time.
  double best_time = -1.0;
  for (const auto& m : out.members) {
    const auto p = must_path(graph, origin, m.destination);
    const double t = p.travel_time_s;
    if (t > best_time ||
        (t == best_time && m.destination < out.final_target)) {
      best_time = t;
      out.final_target = m.destination;
    }
  }

  out.targets = {out.final_target};
  for (const auto& m : out.members) {
    if (std::find(out.targets.begin(), out.targets.end(), m.destination) !=
        out.targets.end()) {
      continue;
    }
    const std::size_t pos = formation_scan(graph, origin, out.targets, m.destination);
    out.targets.insert(out.targets.begin() + (pos - 1), m.destination);
  }

  std::vector<geo::Path> legs;
  NodeId prev = origin;
  for (NodeId t : out.targets) {
    legs.push_back(must_path(graph, prev, t));
    prev = t;
  }
  out.initial_path = concat_paths(graph, legs);

  for (const auto& m : out.members) {
    std::vector<geo::Path> ride;
    for (const auto& leg : legs) {
      ride.push_back(leg);
      if (leg.destination == m.destination) break;
    }
    out.member_rides.push_back(concat_paths(graph, ride));
  }
  return out;
}

std::vector<Candidate> filter_candidates(const geo::RoadGraph& graph,
                                         geo::Vec2 shuttle_pos, NodeId final_target,
                                         const std::vector<NodeId>& visited,
                                         const std::vector<Candidate>& candidates,
                                         double angle_threshold_deg,
                                         std::vector<Rejection>& rejected,
                                         std::vector<double>& angles_out) {
  std::vector<Candidate> kept;
  const geo::Vec2 target_pos = graph.node_pos(final_target);
  for (const auto& c : candidates) {
    double angle;
    try {
      angle = geo::bearing_angle_deg(shuttle_pos, target_pos,
                                     graph.node_pos(c.destination));
    } catch (const DomainError&) {
      // Shuttle standing on its final target: bearing undefined, candidate
      // unfilterable, rejected.
      rejected.push_back({c, RejectReason::angle, -1.0});
      continue;
    }
    if (angle > angle_threshold_deg) {
      rejected.push_back({c, RejectReason::angle, angle});
      continue;
    }
    if (std::find(visited.begin(), visited.end(), c.destination) != visited.end()) {
      rejected.push_back({c, RejectReason::visited_stop, angle});
      continue;
    }
    kept.push_back(c);
    angles_out.push_back(angle);
  }
  return kept;
}

bool insert_destination(InsertionContext& ctx, const geo::RoadGraph& graph,
                        NodeId destination, const std::vector<Candidate>& group,
                        AdmissionDecision& out) {
  if (ctx.open_seats == 0 || group.empty()) return false;

  ctx.added = false;
  const int take = std::min<int>(static_cast<int>(group.size()), ctx.open_seats);
  for (std::size_t i = static_cast<std::size_t>(take); i < group.size(); ++i) {
    out.rejected.push_back({group[i], RejectReason::no_seats, -1.0});
  }

  auto admit_group = [&](int splice_index, bool as_last, bool direct,
                         bool guard_checked, double change, double ta_orig) {
    for (int i = 0; i < take; ++i) {
      AdmissionDecision::Admit a;
      a.candidate = group[static_cast<std::size_t>(i)];
      a.splice_index = splice_index;
      a.as_last = as_last;
      a.direct = direct;
      a.guard_checked = guard_checked;
      a.change_s = change;
      a.av_time_s = ctx.av_time_s;
      a.t_a_original_s = ta_orig;
      out.admitted.push_back(a);
    }
    ctx.open_seats -= take;
    ctx.tot_added_passengers += take;
    ctx.added = true;
  };

  if (destination == ctx.new_origin) {
    // Degenerate case: candidates already stand at their destination. Admit
    // with no splice; they will board and alight at the same stop.
    ctx.counter.ops += 1;
    ctx.counter.count_positions(1);
    admit_group(0, false, true, false, 0.0, 0.0);
    return true;
  }

  const auto in_targets =
      std::find(ctx.targets.begin(), ctx.targets.end(), destination);
  if (in_targets != ctx.targets.end()) {
    // Destination already scheduled: admit directly, no list changes.
    ctx.counter.ops += static_cast<long long>(ctx.targets.size());
    ctx.counter.count_positions(static_cast<int>(ctx.targets.size()));
    admit_group(0, false, true, false, 0.0, 0.0);
    return true;
  }

  const std::size_t max_index = ctx.targets.size();
  int positions = 0;
  for (std::size_t i = 1; i <= max_index; ++i) {
    ++positions;
    const NodeId prev = (i == 1) ? ctx.new_origin : ctx.targets[i - 2];
    const NodeId next = ctx.targets[i - 1];
    const geo::Path t2d = must_path(graph, prev, destination);
    const geo::Path t2n = must_path(graph, prev, next);
    ctx.counter.ops += 3;  // two path computations, one length comparison
    if (t2d.length_m < t2n.length_m) {
      bool check = true;
      bool guard_checked = false;
      double change = 0.0;
      double ta_orig = 0.0;
      if (ctx.first_work_bound) {
        const geo::Path d2t = must_path(graph, destination, next);
        ta_orig = geo::path_travel_time(ctx.original, graph);
        change = ta_orig - geo::path_travel_time(t2n, graph) +
                 geo::path_travel_time(t2d, graph) +
                 geo::path_travel_time(d2t, graph);
        check = change < ta_orig * 3.0 / 2.0 && ctx.av_time_s >= change;
        guard_checked = true;
        ctx.counter.ops += 6;
      }
      if (check) {
        ctx.targets.insert(ctx.targets.begin() + (i - 1), destination);
        // Mirror the splice in the global stop list: just before the stop we
        // were about to compare against.
        auto at = std::find(ctx.stops.begin() + ctx.next_stop, ctx.stops.end(), next);
        if (at == ctx.stops.end()) {
          throw InternalError("target " + std::to_string(next) +
                              " missing from the upcoming stops");
        }
        ctx.stops.insert(at, destination);
        admit_group(static_cast<int>(i), false, false, guard_checked, change, ta_orig);
        if (i == 1) out.path_changed = true;
      } else {
        for (int k = 0; k < take; ++k) {
          out.rejected.push_back({group[static_cast<std::size_t>(k)],
                                  RejectReason::lateness_guard, -1.0});
        }
      }
      ctx.counter.count_positions(positions);
      return true;
    }
  }

  // Scan exhausted: the destination becomes the new last stop.
  ctx.targets.push_back(destination);
  ctx.stops.push_back(destination);
  admit_group(static_cast<int>(max_index + 1), true, false, false, 0.0, 0.0);
  ctx.as_last = true;
  ctx.counter.count_positions(std::max(positions, 1));
  return true;
}

AdmissionDecision try_admit(const geo::RoadGraph& graph, const ShuttleSnapshot& s,
                            const std::vector<Candidate>& candidates,
                            NodeId new_origin, double angle_threshold_deg) {
  if (s.targets.empty()) {
    throw InternalError("try_admit: shuttle has no final target");
  }

  AdmissionDecision out;
  const NodeId final_target = s.targets.back();

  std::vector<Candidate> sorted = candidates;
  sort_by_issue(sorted);
  std::vector<double> angles;
  std::vector<Candidate> kept =
      filter_candidates(graph, s.position, final_target, s.visited, sorted,
                        angle_threshold_deg, out.rejected, angles);

  InsertionContext ctx;
  ctx.targets = s.targets;
  ctx.stops = s.stops;
  ctx.next_stop = s.next_stop;
  ctx.new_origin = new_origin;
  ctx.original = s.original;
  ctx.first_work_bound = s.first_work_bound;
  ctx.av_time_s = s.av_time_s;
  ctx.open_seats = s.open_seats;
  ctx.counter.candidates = static_cast<int>(kept.size());

  // The candidates' position becomes a provisional pickup stop right before
  // the next scheduled one; it is withdrawn below if nobody is admitted.
  bool provisional = false;
  if (ctx.next_stop >= ctx.stops.size() ||
      ctx.stops[ctx.next_stop] != new_origin) {
    ctx.stops.insert(ctx.stops.begin() + ctx.next_stop, new_origin);
    provisional = true;
  }

  for (const auto& c : kept) {
    bool grouped = false;
    for (auto& [d, group] : ctx.groups) {
      if (d == c.destination) {
        group.push_back(c);
        grouped = true;
        break;
      }
    }
    if (!grouped) ctx.groups.push_back({c.destination, {c}});
  }

  for (const auto& [d, group] : ctx.groups) {
    if (!insert_destination(ctx, graph, d, group, out)) break;
  }

  if (ctx.tot_added_passengers == 0 && provisional) {
    // No admissions at this location: the provisional stop is withdrawn. It
    // sits at the cursor (never index 0, the travel origin), so the original
    // departure stop is never removed.
    ctx.stops.erase(ctx.stops.begin() + ctx.next_stop);
  }

  // Attach measured angles to the admitted records.
  for (auto& a : out.admitted) {
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (kept[i].person == a.candidate.person) {
        a.angle_deg = angles[i];
        break;
      }
    }
  }

  out.targets = std::move(ctx.targets);
  out.stops = std::move(ctx.stops);
  out.next_stop = ctx.next_stop;
  out.counter = ctx.counter;
  if (!out.admitted.empty()) out.path_changed = true;
  return out;
}

}  // namespace shuttleswarm::selforg
