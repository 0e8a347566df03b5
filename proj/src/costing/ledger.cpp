#include "shuttleswarm/costing/ledger.hpp"

#include <algorithm>
#include <cmath>

namespace shuttleswarm::costing {

Money leg_cost(double length_m, Money cost_per_km) {
  if (length_m < 0.0) throw DomainError("leg_cost: negative length");
  if (cost_per_km.micros < 0) throw DomainError("leg_cost: negative cost per km");
  // cost = length/1000 * cost_per_km, held at micro precision.
  const double micros = length_m * static_cast<double>(cost_per_km.micros) / 1000.0;
  return Money::from_micros(std::llround(micros));
}

std::vector<std::pair<PersonId, Money>> split_leg(const Leg& leg) {
  if (leg.passengers.empty()) {
    throw DomainError("split_leg: no passengers aboard (dead-running legs are not split)");
  }
  const std::int64_t n = static_cast<std::int64_t>(leg.passengers.size());
  const std::int64_t base = leg.cost.micros / n;
  std::int64_t remainder = leg.cost.micros % n;
  std::vector<std::pair<PersonId, Money>> shares;
  shares.reserve(leg.passengers.size());
  for (PersonId p : leg.passengers) {
    std::int64_t share = base;
    if (remainder > 0) {
      ++share;
      --remainder;
    }
    shares.emplace_back(p, Money::from_micros(share));
  }
  return shares;
}

void LegLedger::close_leg(NodeId stop) {
  if (pending_m_ <= 0.0) {
    prev_stop_ = stop;
    return;
  }
  Leg leg;
  leg.index = static_cast<int>(legs_.size());
  leg.from_stop = prev_stop_;
  leg.to_stop = stop;
  leg.length_m = pending_m_;
  leg.passengers = aboard_;
  leg.cost = aboard_.empty() ? Money{} : leg_cost(pending_m_, cost_per_km_);
  if (!aboard_.empty()) {
    for (const auto& [person, share] : split_leg(leg)) {
      charges_[person] += share;
    }
  }
  closed_m_ += pending_m_;
  pending_m_ = 0.0;
  prev_stop_ = stop;
  legs_.push_back(std::move(leg));
}

void LegLedger::on_stop_event(NodeId stop, std::span<const PersonId> boarded,
                              std::span<const PersonId> alighted) {
  close_leg(stop);
  for (PersonId p : alighted) {
    auto it = std::find(aboard_.begin(), aboard_.end(), p);
    if (it == aboard_.end()) {
      throw DomainError("ledger: alighting person " + std::to_string(p) +
                        " who is not aboard");
    }
    aboard_.erase(it);
  }
  for (PersonId p : boarded) {
    aboard_.insert(std::upper_bound(aboard_.begin(), aboard_.end(), p), p);
    charges_.try_emplace(p, Money{});  // zero-leg riders still get an account
  }
}

void LegLedger::finalize(NodeId final_node) { close_leg(final_node); }

Money LegLedger::path_cost() const {
  Money total;
  for (const auto& leg : legs_) total += leg.cost;
  return total;
}

Money LegLedger::billed_cost() const {
  Money total;
  for (const auto& leg : legs_) {
    if (!leg.passengers.empty()) total += leg.cost;
  }
  return total;
}

Money LegLedger::passenger_total(PersonId person) const {
  auto it = charges_.find(person);
  if (it == charges_.end()) {
    throw DomainError("ledger: unknown person " + std::to_string(person));
  }
  return it->second;
}

}  // namespace shuttleswarm::costing
