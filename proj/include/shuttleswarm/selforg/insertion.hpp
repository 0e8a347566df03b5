#pragma once

#include <vector>

#include "shuttleswarm/geo/road_graph.hpp"
#include "shuttleswarm/ids.hpp"

namespace shuttleswarm::selforg {

// One person's pending lift request as seen by a shuttle.
struct Candidate {
  PersonId person = -1;
  NodeId origin = kNoNode;
  NodeId destination = kNoNode;
  SimSeconds issue = 0;
  bool to_work = false;
  SimSeconds work_start = 0;
};

enum class RejectReason { angle, visited_stop, no_seats, lateness_guard };
const char* to_string(RejectReason r);

struct Rejection {
  Candidate candidate;
  RejectReason reason;
  double angle_deg = -1.0;  // measured value for angle rejections
};

// Instrumentation for the admission procedure: per invocation, n candidates
// and m scanned stop positions bound the basic operations by
// kOpsPerPositionBound * n * m.
struct OpCounter {
  int candidates = 0;     // n
  int max_positions = 0;  // m: most positions touched for one destination
  long long ops = 0;      // path computations, length comparisons, time evals

  void count_positions(int positions) {
    if (positions > max_positions) max_positions = positions;
  }
};
inline constexpr long long kOpsPerPositionBound = 16;

// Working state of one admission pass over the candidates found at one
// location. Pure data: the procedure reads the graph and this context only.
struct InsertionContext {
  // Candidates grouped by destination, in first-appearance (issue) order.
  std::vector<std::pair<NodeId, std::vector<Candidate>>> groups;
  std::vector<NodeId> targets;      // upcoming destinations, visiting order
  std::vector<NodeId> stops;        // full episode stop list
  std::size_t next_stop = 0;        // cursor into stops
  NodeId new_origin = kNoNode;      // where the candidates stand
  geo::Path original;               // first passenger's ride as first quoted
  bool first_work_bound = false;
  double av_time_s = 0.0;           // first passenger's remaining budget
  int open_seats = 0;
  int tot_added_passengers = 0;
  bool added = false;
  bool as_last = false;
  bool up_costs_pass = false;  // initialized by the procedure, never read by it
  OpCounter counter;
};

struct OpCount {
  int candidates = 0;     // n
  int stops_scanned = 0;  // m
  long long ops = 0;
};
inline OpCount operation_cost_counter(const InsertionContext& ctx) {
  return {ctx.counter.candidates, ctx.counter.max_positions, ctx.counter.ops};
}

struct AdmissionDecision {
  struct Admit {
    Candidate candidate;
    int splice_index = 0;  // 1-based position; 0 for direct/no-splice admits
    bool as_last = false;
    bool direct = false;        // destination already among the targets
    bool guard_checked = false;
    double change_s = 0.0;
    double av_time_s = 0.0;
    double t_a_original_s = 0.0;
    double angle_deg = -1.0;  // filled by try_admit from the filter pass
  };

  std::vector<Admit> admitted;
  std::vector<Rejection> rejected;
  std::vector<NodeId> targets;  // updated copies
  std::vector<NodeId> stops;
  std::size_t next_stop = 0;
  bool path_changed = false;  // an admission spliced ahead of the next leg
  OpCounter counter;
};

// View of the shuttle state the procedure needs; agents build it, selforg
// never touches agent types.
struct ShuttleSnapshot {
  geo::Vec2 position{};
  std::vector<NodeId> targets;
  std::vector<NodeId> stops;
  std::size_t next_stop = 0;
  std::vector<NodeId> visited;  // stop events completed this episode
  int open_seats = 0;
  bool first_work_bound = false;
  double av_time_s = 0.0;
  geo::Path original;
};

// Initial group formation when a wandering shuttle finds requests at one
// origin. Takes up to `capacity` requests (earliest issue first, ties by
// person id); the final target is the destination with the largest
// shortest-path time from the origin (ties to the lowest node id); remaining
// destinations are placed by the insertion scan with the final target pinned
// last.
struct InitialGroup {
  std::vector<Candidate> members;
  std::vector<Rejection> rejected;  // overflow beyond capacity: no_seats
  NodeId origin = kNoNode;
  NodeId final_target = kNoNode;
  std::vector<NodeId> targets;           // visiting order, final target last
  geo::Path initial_path;                // origin through every target
  std::vector<geo::Path> member_rides;   // parallel to members: origin->dest
};
InitialGroup form_initial_group(const geo::RoadGraph& graph, NodeId origin,
                                std::vector<Candidate> requests, int capacity);

// Angle filter then visited-stop filter; survivors keep issue-time order.
// angles_out (parallel to the returned vector) carries the measured angle of
// each survivor. An undefined bearing (shuttle standing on its final target)
// rejects everything with reason angle.
std::vector<Candidate> filter_candidates(const geo::RoadGraph& graph,
                                         geo::Vec2 shuttle_pos, NodeId final_target,
                                         const std::vector<NodeId>& visited,
                                         const std::vector<Candidate>& candidates,
                                         double angle_threshold_deg,
                                         std::vector<Rejection>& rejected,
                                         std::vector<double>& angles_out);

// One destination group of the admission loop. Returns false when the loop
// must stop (no open seats / empty group). Mutates ctx and appends to `out`.
bool insert_destination(InsertionContext& ctx, const geo::RoadGraph& graph,
                        NodeId destination, const std::vector<Candidate>& group,
                        AdmissionDecision& out);

// Full admission procedure for candidates standing at new_origin: filter,
// per-destination insertion, and the no-admission origin cleanup. Pure.
AdmissionDecision try_admit(const geo::RoadGraph& graph, const ShuttleSnapshot& s,
                            const std::vector<Candidate>& candidates,
                            NodeId new_origin, double angle_threshold_deg);

}  // namespace shuttleswarm::selforg
