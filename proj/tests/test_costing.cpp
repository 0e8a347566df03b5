#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>

#include "shuttleswarm/costing/ledger.hpp"
#include "shuttleswarm/engine/rng.hpp"

using namespace shuttleswarm;
using namespace shuttleswarm::costing;

TEST_CASE("leg_cost applies length/1000 * cost_per_km") {
  CHECK(leg_cost(3000.0, Money::from_units(1.0)) == Money::from_units(3.0));
  CHECK(leg_cost(0.0, Money::from_units(1.0)) == Money{});
  CHECK(leg_cost(1234.0, Money::from_units(0.5)) == Money::from_micros(617000));
  CHECK_THROWS_AS(leg_cost(-1.0, Money::from_units(1.0)), DomainError);
  CHECK_THROWS_AS(leg_cost(1.0, Money::from_units(-1.0)), DomainError);
}

TEST_CASE("split_leg divides evenly and conserves the leg cost") {
  Leg leg;
  leg.cost = Money::from_units(3.0);
  leg.passengers = {1, 2, 3};
  for (const auto& [p, share] : split_leg(leg)) CHECK(share == Money::from_units(1.0));

  leg.passengers = {5};
  CHECK(split_leg(leg)[0].second == Money::from_units(3.0));

  leg.cost = Money::from_units(5.0);
  leg.passengers = {1, 2, 3, 4};
  Money sum;
  for (const auto& [p, share] : split_leg(leg)) {
    CHECK(share == Money::from_units(1.25));
    sum += share;
  }
  CHECK(sum == leg.cost);

  leg.passengers.clear();
  CHECK_THROWS_AS(split_leg(leg), DomainError);
}

TEST_CASE("ledger: two-leg hand trace") {
  // A rides two 2-unit legs; B joins for the second: A pays 2+1, B pays 1.
  LegLedger ledger(Money::from_units(1.0), 100);
  ledger.on_stop_event(100, std::vector<PersonId>{1}, {});  // A boards at origin
  ledger.add_distance(2000.0);
  ledger.on_stop_event(101, std::vector<PersonId>{2}, {});  // B boards
  ledger.add_distance(2000.0);
  ledger.on_stop_event(102, {}, std::vector<PersonId>{1, 2});
  CHECK(ledger.passenger_total(1) == Money::from_units(3.0));
  CHECK(ledger.passenger_total(2) == Money::from_units(1.0));
  CHECK(ledger.path_cost() == Money::from_units(4.0));
}

TEST_CASE("ledger: path_cost sums legs and dead-running is never billed") {
  LegLedger ledger(Money::from_units(1.0), 0);
  CHECK(ledger.path_cost() == Money{});

  ledger.add_distance(500.0);  // empty shuttle approaching the pickup
  ledger.on_stop_event(1, std::vector<PersonId>{9}, {});
  ledger.add_distance(3000.0);
  ledger.on_stop_event(2, {}, std::vector<PersonId>{9});
  ledger.add_distance(250.0);
  ledger.finalize(3);

  REQUIRE(ledger.legs().size() == 3);
  CHECK(ledger.legs()[0].passengers.empty());
  CHECK(ledger.legs()[0].cost == Money{});
  CHECK(ledger.legs()[2].passengers.empty());
  CHECK(ledger.path_cost() == Money::from_units(3.0));
  CHECK(ledger.billed_cost() == Money::from_units(3.0));
  CHECK(ledger.passenger_total(9) == Money::from_units(3.0));
  CHECK(ledger.total_length_m() == doctest::Approx(3750.0));
}

TEST_CASE("ledger: pass-through events with zero distance do not create legs") {
  LegLedger ledger(Money::from_units(1.0), 0);
  ledger.on_stop_event(1, std::vector<PersonId>{1}, {});
  ledger.on_stop_event(1, std::vector<PersonId>{2}, {});  // same node, no travel
  CHECK(ledger.legs().empty());
  ledger.add_distance(1000.0);
  ledger.on_stop_event(2, {}, std::vector<PersonId>{1, 2});
  REQUIRE(ledger.legs().size() == 1);
  CHECK(ledger.legs()[0].passengers.size() == 2);
}

TEST_CASE("ledger: board-and-alight at the same stop is charged nothing") {
  LegLedger ledger(Money::from_units(1.0), 0);
  ledger.on_stop_event(1, std::vector<PersonId>{4}, {});
  ledger.on_stop_event(1, {}, std::vector<PersonId>{4});
  CHECK(ledger.passenger_total(4) == Money{});
}

TEST_CASE("ledger: alighting someone not aboard is an accounting error") {
  LegLedger ledger(Money::from_units(1.0), 0);
  CHECK_THROWS_AS(ledger.on_stop_event(1, {}, std::vector<PersonId>{3}), DomainError);
}

TEST_CASE("ledger: riders sharing every leg split the cost symmetrically") {
  LegLedger ledger(Money::from_units(1.0), 0);
  ledger.on_stop_event(1, std::vector<PersonId>{1, 2}, {});
  ledger.add_distance(10000.0);
  ledger.on_stop_event(2, {}, std::vector<PersonId>{1, 2});
  CHECK(ledger.passenger_total(1) == ledger.passenger_total(2));
  CHECK(ledger.passenger_total(1) == Money::from_units(5.0));
}

TEST_CASE("ledger conservation and monotonicity over random histories") {
  engine::SeededRng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    LegLedger ledger(Money::from_units(1.0), 0);
    std::vector<PersonId> aboard;
    PersonId next_person = 0;
    for (int ev = 0; ev < 30; ++ev) {
      ledger.add_distance(rng.uniform(0.0, 4000.0));
      std::vector<PersonId> boarded, alighted;
      for (PersonId p : aboard) {
        if (rng.uniform01() < 0.3) alighted.push_back(p);
      }
      for (PersonId p : alighted) std::erase(aboard, p);
      const int join = static_cast<int>(rng.uniform_index(3));
      for (int j = 0; j < join && aboard.size() < 12; ++j) {
        boarded.push_back(next_person);
        aboard.push_back(next_person++);
      }
      ledger.on_stop_event(static_cast<NodeId>(ev), boarded, alighted);
    }
    ledger.finalize(999);

    // Conservation: total charged equals total billed, exactly.
    Money charged;
    for (const auto& [p, total] : ledger.charges()) {
      CHECK(Money{} <= total);
      charged += total;
    }
    CHECK(charged == ledger.billed_cost());

    // Per-leg: shares sum exactly; an extra rider strictly lowers each share.
    for (const auto& leg : ledger.legs()) {
      if (leg.passengers.empty()) continue;
      Money sum;
      Money max_share;
      for (const auto& [p, share] : split_leg(leg)) {
        sum += share;
        if (max_share < share) max_share = share;
      }
      CHECK(sum == leg.cost);
      if (leg.cost.micros >= 1000 && leg.passengers.size() < 12) {
        Leg bigger = leg;
        bigger.passengers.push_back(9999);
        Money new_max;
        for (const auto& [p, share] : split_leg(bigger)) {
          if (p != 9999 && new_max < share) new_max = share;
        }
        CHECK(new_max < max_share);
      }
    }
  }
}

TEST_CASE("money rounding is half-even and exact") {
  CHECK(format_money_2dp(Money::from_micros(1235000)) == "1.24");  // 1.235 -> ties to even
  CHECK(format_money_2dp(Money::from_micros(1245000)) == "1.24");
  CHECK(format_money_2dp(Money::from_micros(1245001)) == "1.25");
  CHECK(format_money_2dp(Money::from_units(2.6)) == "2.60");
  CHECK(round_div_half_even(5, 2) == 2);
  CHECK(round_div_half_even(7, 2) == 4);
  CHECK(round_div_half_even(9, 3) == 3);
}
