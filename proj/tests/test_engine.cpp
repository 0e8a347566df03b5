#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "shuttleswarm/engine/congestion.hpp"
#include "shuttleswarm/engine/event_log.hpp"
#include "shuttleswarm/engine/movement.hpp"
#include "shuttleswarm/engine/run.hpp"
#include "shuttleswarm/engine/world.hpp"
#include "shuttleswarm/geo/grid_city.hpp"
#include "shuttleswarm/metrics/report.hpp"
#include "support/test_util.hpp"

using namespace shuttleswarm;
using namespace shuttleswarm::engine;
using testsupport::make_city;

namespace {

harness::ScenarioConfig small_scenario() {
  harness::ScenarioConfig cfg;
  cfg.grid = harness::GridCitySpec{4, 4, 150.0, std::nullopt};
  cfg.fleet_size = 1;
  cfg.user_count = 1;
  cfg.common_car_count = 2;
  cfg.seed = 11;
  return cfg;
}

}  // namespace

TEST_CASE("congestion coefficient follows 1/(1+alpha*density)") {
  auto g = geo::build_road_graph(make_city({{0, {0, 0}}, {1, {100, 0}}},
                                           {{0, 1, 100.0, 10.0, false, 1},
                                            {1, 0, 100.0, 10.0, true, 2}}));
  // edge 0: lanes 1, edge 1/2 from the two-way + oneway; find a lanes-2 edge
  EdgeId lane1 = kNoEdge, lane2 = kNoEdge;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (g.edge(static_cast<EdgeId>(e)).lanes == 1) lane1 = static_cast<EdgeId>(e);
    if (g.edge(static_cast<EdgeId>(e)).lanes == 2) lane2 = static_cast<EdgeId>(e);
  }
  REQUIRE(lane1 != kNoEdge);
  REQUIRE(lane2 != kNoEdge);

  std::vector<EdgeId> vehicles;
  auto state = update_congestion(g, vehicles, 0.25);
  CHECK(state.coefficient[static_cast<std::size_t>(lane1)] == doctest::Approx(1.0));

  // 4 vehicles on the 1-lane edge -> 0.5; 4 on the 2-lane edge -> 2/3.
  vehicles = {lane1, lane1, lane1, lane1};
  state = update_congestion(g, vehicles, 0.25);
  CHECK(state.coefficient[static_cast<std::size_t>(lane1)] == doctest::Approx(0.5));

  vehicles = {lane2, lane2, lane2, lane2};
  state = update_congestion(g, vehicles, 0.25);
  CHECK(state.coefficient[static_cast<std::size_t>(lane2)] == doctest::Approx(2.0 / 3.0));
  CHECK(g.edge(lane2).vehicle_count == 4);
}

TEST_CASE("advance moves speed*dt along a straight edge") {
  auto g = geo::build_road_graph(make_city({{0, {0, 0}}, {1, {100, 0}}},
                                           {{0, 1, 100.0, 20.0, false}}));
  Traveler t;
  t.set_route(*geo::shortest_path(g, 0, 1));
  const auto res = advance_along_path(t, g, 10.0, 1.0);
  CHECK(res.moved_m == doctest::Approx(10.0));
  CHECK(t.offset_m == doctest::Approx(10.0));
  CHECK(!res.arrived);
}

TEST_CASE("advance halts at a scheduled stop but rolls through plain nodes") {
  auto g = geo::build_road_graph(
      make_city({{0, {0, 0}}, {1, {100, 0}}, {2, {200, 0}}},
                {{0, 1, 100.0, 20.0, false}, {1, 2, 100.0, 20.0, false}}));
  Traveler t;
  t.set_route(*geo::shortest_path(g, 0, 2));
  advance_along_path(t, g, 10.0, 9.5);  // 5 m short of node 1

  SUBCASE("node 1 is a stop: movement ends there, residual discarded") {
    auto copy = t;
    const auto res = advance_along_path(copy, g, 10.0, 1.0, 1);
    CHECK(res.halted);
    CHECK(copy.node == 1);
    CHECK(res.moved_m == doctest::Approx(5.0));
  }
  SUBCASE("node 1 is plain: the leftover time continues onto the next edge") {
    auto copy = t;
    const auto res = advance_along_path(copy, g, 10.0, 1.0);
    CHECK(!res.halted);
    CHECK(res.moved_m == doctest::Approx(10.0));
    CHECK(copy.offset_m == doctest::Approx(5.0));
    CHECK(copy.current_edge() != kNoEdge);
  }
}

TEST_CASE("effective speed is min(agent, free-flow * coefficient)") {
  auto g = geo::build_road_graph(make_city({{0, {0, 0}}, {1, {100, 0}}},
                                           {{0, 1, 100.0, 10.0, false}}));
  g.edge(0).speed_coefficient = 0.5;
  Traveler t;
  t.set_route(*geo::shortest_path(g, 0, 1));
  const auto res = advance_along_path(t, g, 20.0, 1.0);
  CHECK(res.moved_m == doctest::Approx(5.0));
}

TEST_CASE("advance clamps at the final node") {
  auto g = geo::build_road_graph(make_city({{0, {0, 0}}, {1, {100, 0}}},
                                           {{0, 1, 100.0, 50.0, false}}));
  Traveler t;
  t.set_route(*geo::shortest_path(g, 0, 1));
  const auto res = advance_along_path(t, g, 50.0, 10.0);
  CHECK(res.arrived);
  CHECK(res.moved_m == doctest::Approx(100.0));
  CHECK(t.node == 1);
  CHECK(!t.en_route());
}

TEST_CASE("crossed nodes are graph-adjacent (no teleporting)") {
  auto g = geo::build_road_graph(geo::generate_grid_city(4, 4, 100.0, 3));
  Traveler t;
  t.set_route(*geo::shortest_path(g, 0, 15));
  std::vector<NodeId> crossed{0};
  while (t.en_route()) {
    const auto res = advance_along_path(t, g, 14.0, 1.0);
    crossed.insert(crossed.end(), res.crossed.begin(), res.crossed.end());
  }
  for (std::size_t i = 1; i < crossed.size(); ++i) {
    bool adjacent = false;
    for (EdgeId e : g.out_edges(crossed[i - 1])) {
      adjacent |= g.edge(e).to == crossed[i];
    }
    CHECK(adjacent);
  }
  CHECK(crossed.back() == 15);
}

TEST_CASE("event log round-trips through text") {
  EventLog log;
  log.append(120, "stop", {{"shuttle", "3"}, {"node", "7"}, {"boarded", "1,2"}, {"alighted", "-"}});
  log.append(121, "transition", {{"agent", "P1"}, {"from", "wait_for_lift"}, {"to", "go_work"}});
  const auto parsed = EventLog::parse(log.to_text());
  REQUIRE(parsed.records.size() == 2);
  CHECK(parsed.records[0].t == 120);
  CHECK(parsed.records[0].get("boarded") == "1,2");
  CHECK(split_ids(parsed.records[0].get("alighted")).empty());
  CHECK(parsed.records[1].get("to") == "go_work");
  CHECK_THROWS_AS(EventLog::parse("garbage line\n"), ParseError);
}

TEST_CASE("empty world: clock advances, nothing else") {
  harness::ScenarioConfig cfg = small_scenario();
  cfg.user_count = 0;
  cfg.fleet_size = 0;
  cfg.common_car_count = 0;
  const auto result = run_scenario(cfg);
  CHECK(result.report.users_total == 0);
  CHECK(result.report.users_served == 0);
  CHECK(!result.report.incomplete);
  CHECK(result.report.total_gain == costing::Money{});
}

TEST_CASE("minimal scenario: one person, one shuttle, served") {
  const auto result = run_scenario(small_scenario());
  CHECK(result.report.users_total == 1);
  CHECK(result.report.users_served == 1);
  CHECK(!result.report.incomplete);
  CHECK(result.report.total_gain.micros > 0);
}

TEST_CASE("identical config and seed give identical outputs") {
  const auto a = run_scenario(small_scenario());
  const auto b = run_scenario(small_scenario());
  CHECK(a.events.to_text() == b.events.to_text());
  CHECK(metrics::report_json_text(a.report) == metrics::report_json_text(b.report));
  CHECK(metrics::series_csv_text(a.report) == metrics::series_csv_text(b.report));
  CHECK(ledger_csv_text(a) == ledger_csv_text(b));

  auto cfg = small_scenario();
  cfg.seed = 12;
  const auto c = run_scenario(cfg);
  CHECK(a.events.to_text() != c.events.to_text());
}

TEST_CASE("odometer equals the ledger length integral") {
  auto cfg = small_scenario();
  cfg.user_count = 8;
  cfg.fleet_size = 2;
  const auto result = run_scenario(cfg);
  for (const auto& s : result.shuttles) {
    double total = 0.0;
    for (const auto& leg : s.legs) total += leg.length_m;
    CHECK(total == doctest::Approx(s.odometer_m).epsilon(1e-9));
  }
}

TEST_CASE("a request posted by a person is visible to shuttles the same tick") {
  // Persons step before shuttles: a shuttle standing 100 m away commits with
  // the same timestamp as the request.
  World w(2);
  w.graph = geo::build_road_graph(geo::generate_grid_city(3, 3, 100.0, 2));
  w.clock = 21600;
  agents::Person p;
  p.id = 0;
  p.living_place = 0;
  p.working_place = 8;
  p.work_start = w.clock + w.params.lookahead;
  p.work_end = p.work_start + 8 * 3600;
  p.motion.node = 0;
  w.persons.push_back(p);
  agents::Shuttle s;
  s.id = 0;
  s.speed_ms = 5.0;
  s.motion.node = 1;
  s.ledger = costing::LegLedger(w.params.cost_per_km, 1);
  w.shuttles.push_back(std::move(s));

  step(w, nullptr);
  SimSeconds requested = -1, committed = -2;
  for (const auto& rec : w.events.records) {
    if (rec.kind == "request" && requested < 0) requested = rec.t;
    if (rec.kind == "commit" && committed < 0) committed = rec.t;
  }
  REQUIRE(requested >= 0);
  CHECK(committed == requested);
}

TEST_CASE("expired requests leave the pool before agents step") {
  World w(1);
  w.graph = geo::build_road_graph(geo::generate_grid_city(2, 2, 100.0, 1));
  w.clock = 100;
  agents::LiftRequest r;
  r.person = 0;
  r.origin = 0;
  r.destination = 3;
  r.issue = 40;
  r.expiry = 100;
  w.post_request(r);
  CHECK(w.has_request(0));
  step(w, nullptr);
  CHECK(!w.has_request(0));
}
