#include "shuttleswarm/engine/run.hpp"

#include "shuttleswarm/engine/world.hpp"
#include "shuttleswarm/geo/geojson.hpp"
#include "shuttleswarm/geo/grid_city.hpp"
#include "shuttleswarm/harness/population.hpp"

namespace shuttleswarm::engine {

RunResult run_scenario(const harness::ScenarioConfig& base,
                       std::optional<std::uint64_t> seed_override) {
  harness::ScenarioConfig cfg = base;
  if (seed_override) cfg.seed = *seed_override;
  cfg.validate();

  geo::CityModel city;
  if (cfg.grid) {
    city = geo::generate_grid_city(cfg.grid->rows, cfg.grid->cols, cfg.grid->block_m,
                                   cfg.grid->seed.value_or(cfg.seed));
  } else {
    city = geo::load_city_file(*cfg.city_file).city;
  }

  World w(cfg.seed);
  w.graph = geo::build_road_graph(city);
  w.params.step_seconds = cfg.step_seconds;
  w.params.start_time = cfg.start_time;
  w.params.wait_timeout = cfg.wait_timeout;
  w.params.lookahead = cfg.lookahead;
  w.params.pickup_radius_m = cfg.pickup_radius_m;
  w.params.angle_threshold_deg = cfg.angle_threshold_deg;
  w.params.dwell_seconds = cfg.dwell_seconds;
  w.params.congestion_alpha = cfg.congestion_alpha;
  w.params.max_ticks = cfg.effective_max_ticks();
  w.params.cost_per_km = costing::Money::from_units(cfg.cost_per_km);
  w.clock = cfg.start_time;

  // Seed consumption order is part of the determinism contract:
  // population (homes, workplaces, start times), cars, then shuttles.
  auto pop = harness::build_population(cfg, city, w.graph, w.rng);
  w.persons = std::move(pop.persons);
  w.cars = std::move(pop.cars);

  const auto& ids = w.graph.node_ids();
  for (int i = 0; i < cfg.fleet_size; ++i) {
    agents::Shuttle s;
    s.id = i;
    s.capacity = w.params.shuttle_capacity;
    s.speed_ms = cfg.shuttle_speed_kmh / 3.6;
    s.motion.node = ids[w.rng.uniform_index(ids.size())];
    s.ledger = costing::LegLedger(w.params.cost_per_km, s.motion.node);
    w.shuttles.push_back(std::move(s));
  }

  metrics::Collector collector(cfg.sampling_interval);
  while (w.tick < w.params.max_ticks && !all_persons_done(w)) {
    step(w, &collector);
  }

  for (auto& s : w.shuttles) {
    s.ledger.finalize(s.motion.en_route() ? w.graph.edge(s.motion.current_edge()).to
                                          : s.motion.node);
  }

  RunResult result;
  result.report = collector.summarize(w, !all_persons_done(w));
  result.events = std::move(w.events);
  for (const auto& s : w.shuttles) {
    RunResult::ShuttleExport ex;
    ex.id = s.id;
    ex.odometer_m = s.odometer_m;
    ex.lifts = s.cumulative_lifts;
    ex.legs = s.ledger.legs();
    ex.charges = s.ledger.charges();
    result.shuttles.push_back(std::move(ex));
  }
  return result;
}

std::string ledger_csv_text(const RunResult& result) {
  std::string out = "shuttle,leg_index,from,to,length_m,cost_micros,passengers\n";
  for (const auto& s : result.shuttles) {
    for (const auto& leg : s.legs) {
      out += std::to_string(s.id);
      out += ',';
      out += std::to_string(leg.index);
      out += ',';
      out += std::to_string(leg.from_stop);
      out += ',';
      out += std::to_string(leg.to_stop);
      out += ',';
      out += fmt_double(leg.length_m);
      out += ',';
      out += std::to_string(leg.cost.micros);
      out += ',';
      for (std::size_t i = 0; i < leg.passengers.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(leg.passengers[i]);
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace shuttleswarm::engine
