#pragma once

#include <map>
#include <span>
#include <vector>

#include "shuttleswarm/costing/money.hpp"
#include "shuttleswarm/ids.hpp"

namespace shuttleswarm::costing {

// One traveled leg between two consecutive stop events, with the passengers
// that were aboard for its whole span. Legs with an empty passenger set are
// dead-running: traveled, recorded, never billed.
struct Leg {
  int index = 0;
  NodeId from_stop = kNoNode;
  NodeId to_stop = kNoNode;
  double length_m = 0.0;
  std::vector<PersonId> passengers;  // ascending id
  Money cost;                        // 0 for dead-running legs
};

// cost_per_km * length is charged per leg and split evenly among the
// passengers aboard that leg. Splits use largest-remainder assignment in
// ascending passenger-id order, so the shares of a leg always sum to its cost
// exactly.
Money leg_cost(double length_m, Money cost_per_km);
std::vector<std::pair<PersonId, Money>> split_leg(const Leg& leg);

class LegLedger {
 public:
  LegLedger() = default;
  explicit LegLedger(Money cost_per_km, NodeId start_node = kNoNode)
      : cost_per_km_(cost_per_km), prev_stop_(start_node) {}

  Money cost_per_km() const { return cost_per_km_; }

  // Movement feed: meters traveled since the last call.
  void add_distance(double meters) { pending_m_ += meters; }

  // Closes the leg that ended at `stop` (billing the passengers that rode
  // it), then applies alightings and boardings, in that order. A zero-length
  // gap between events produces no leg. Throws DomainError when alighting an
  // id that is not aboard.
  void on_stop_event(NodeId stop, std::span<const PersonId> boarded,
                     std::span<const PersonId> alighted);

  // Closes any trailing dead-running distance at end of run.
  void finalize(NodeId final_node);

  const std::vector<Leg>& legs() const { return legs_; }
  const std::vector<PersonId>& aboard() const { return aboard_; }

  // Sum of every leg cost (dead-running legs cost 0 by construction).
  Money path_cost() const;
  // Sum of billed legs only; equals path_cost but is the fleet-gain view.
  Money billed_cost() const;
  // Total length across all legs, including the still-open one.
  double total_length_m() const { return closed_m_ + pending_m_; }

  // Exact accumulated charge; throws DomainError for persons never aboard.
  Money passenger_total(PersonId person) const;
  const std::map<PersonId, Money>& charges() const { return charges_; }

 private:
  void close_leg(NodeId stop);

  Money cost_per_km_;
  NodeId prev_stop_ = kNoNode;
  double pending_m_ = 0.0;
  double closed_m_ = 0.0;
  std::vector<PersonId> aboard_;  // ascending
  std::vector<Leg> legs_;
  std::map<PersonId, Money> charges_;
};

}  // namespace shuttleswarm::costing
