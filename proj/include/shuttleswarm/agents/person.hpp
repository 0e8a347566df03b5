#pragma once

#include <optional>
#include <vector>

#include "shuttleswarm/engine/movement.hpp"
#include "shuttleswarm/ids.hpp"

namespace shuttleswarm::engine {
struct World;
}

namespace shuttleswarm::agents {

enum class PersonState {
  resting,
  search_lift_to_work,
  wait_for_lift,
  go_work,
  working,
  search_lift_to_home,
  go_home,
};
const char* to_string(PersonState s);

struct Person {
  PersonId id = -1;
  NodeId living_place = kNoNode;
  NodeId working_place = kNoNode;
  SimSeconds work_start = 0;
  SimSeconds work_end = 0;
  double speed_ms = 8.3333;  // solo fallback travel, private-vehicle pace

  PersonState state = PersonState::resting;
  engine::Traveler motion;  // authoritative position while not aboard
  std::vector<NodeId> nearby_intersections;
  std::optional<SimSeconds> wait_deadline;

  // Lift lifecycle.
  ShuttleId committed_shuttle = -1;
  bool aboard = false;
  SimSeconds request_issue = -1;
  SimSeconds board_wait_s = -1;  // boarding - issue, for the served trip
  bool morning_search_done = false;
  bool evening_search_done = false;
  bool served_to_work = false;
  bool served_to_home = false;
  bool cycle_complete = false;
  std::vector<SimSeconds> wait_samples_s;  // one per served trip

  struct Stats {
    bool late = false;
    SimSeconds actual_time_in = -1;
    double time_to_cover = 0.0;
    double distance_to_cover = 0.0;
    double dist_covered_alone = 0.0;
  } stats;

  bool is_searching() const {
    return state == PersonState::search_lift_to_work ||
           state == PersonState::search_lift_to_home;
  }
  NodeId current_node() const { return motion.node; }
};

// One FSM transition at most per call; movement while traveling solo.
void step_person(Person& p, engine::World& w);

// Route search toward `target`: sets the person's route and records
// time_to_cover / distance_to_cover from the found path.
void person_search_path(Person& p, NodeId target, const geo::RoadGraph& graph);

// State change + transition log in one place; used by the person's own step
// and by shuttles committing/boarding/alighting them.
void transition_person(Person& p, engine::World& w, PersonState to);

// Arrival handling shared between solo travel and shuttle alighting.
void person_arrive(Person& p, engine::World& w, NodeId node);

}  // namespace shuttleswarm::agents
