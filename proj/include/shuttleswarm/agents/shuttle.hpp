#pragma once

#include <set>
#include <vector>

#include "shuttleswarm/costing/ledger.hpp"
#include "shuttleswarm/engine/movement.hpp"
#include "shuttleswarm/geo/road_graph.hpp"
#include "shuttleswarm/ids.hpp"

namespace shuttleswarm::engine {
struct World;
}

namespace shuttleswarm::agents {

enum class ShuttleState { wander, first_stop, moving, stop };
const char* to_string(ShuttleState s);

struct BoardedPassenger {
  PersonId id = -1;
  NodeId origin = kNoNode;
  NodeId destination = kNoNode;
  SimSeconds boarded_at = 0;
  bool to_work = false;
  SimSeconds work_start = 0;
  geo::Path quoted;        // ride as quoted at admission; lateness-guard base
  SimSeconds eta = 0;      // refreshed whenever the plan changes
};

struct CommittedPickup {
  PersonId id = -1;
  NodeId origin = kNoNode;
  NodeId destination = kNoNode;
  SimSeconds committed_at = 0;
  bool to_work = false;
  SimSeconds work_start = 0;
  geo::Path quoted;  // planned ride at admission time
};

struct StopEta {
  NodeId node = kNoNode;
  SimSeconds expected = 0;
  SimSeconds actual = -1;
};

struct Shuttle {
  ShuttleId id = -1;
  int capacity = 12;
  double speed_ms = 13.8889;
  ShuttleState state = ShuttleState::wander;
  engine::Traveler motion;
  int dwell_left = 0;  // ticks remaining at the current stop

  // Service episode plan. `stops` is the global ordered stop list (pickup
  // origins and destinations); `next_stop` is the cursor; `targets` holds the
  // upcoming destinations in visiting order, final objective last.
  std::vector<NodeId> stops;
  std::size_t next_stop = 0;
  std::vector<NodeId> targets;
  std::vector<NodeId> visited;  // completed stop events this episode
  std::vector<BoardedPassenger> onboard;  // boarding order
  std::vector<CommittedPickup> pending;
  std::set<PersonId> considered;  // requests already evaluated this episode
  NodeId wander_target = kNoNode;

  costing::LegLedger ledger;
  double odometer_m = 0.0;
  int cumulative_lifts = 0;
  std::vector<StopEta> stop_etas;

  int open_seats() const {
    return capacity - static_cast<int>(onboard.size()) -
           static_cast<int>(pending.size());
  }
  bool episode_done() const {
    return onboard.empty() && pending.empty() && targets.empty();
  }
};

void step_shuttle(Shuttle& s, engine::World& w);

}  // namespace shuttleswarm::agents
