#include "shuttleswarm/harness/population.hpp"

#include "shuttleswarm/errors.hpp"

namespace shuttleswarm::harness {

Population build_population(const ScenarioConfig& cfg, const geo::CityModel& city,
                            const geo::RoadGraph& graph, engine::SeededRng& rng) {
  std::vector<const geo::Building*> residential, industrial;
  for (const auto& b : city.buildings) {
    if (b.category == geo::Building::Category::residential) {
      residential.push_back(&b);
    } else {
      industrial.push_back(&b);
    }
  }
  if (cfg.user_count > 0) {
    if (residential.empty()) throw ConfigError("city has no residential buildings");
    if (industrial.empty()) throw ConfigError("city has no industrial buildings");
    if (cfg.workplace_mode == WorkplaceMode::two && industrial.size() < 2) {
      throw ConfigError("workplace_mode 'two' needs at least 2 industrial buildings");
    }
  }

  // Workplace buildings are drawn before the per-person loop so that the mode
  // does not change how many draws each person consumes.
  const geo::Building* shared_a = nullptr;
  const geo::Building* shared_b = nullptr;
  if (cfg.user_count > 0 && cfg.workplace_mode != WorkplaceMode::diversified) {
    shared_a = industrial[rng.uniform_index(industrial.size())];
    if (cfg.workplace_mode == WorkplaceMode::two) {
      do {
        shared_b = industrial[rng.uniform_index(industrial.size())];
      } while (industrial.size() > 1 && shared_b == shared_a);
    }
  }

  Population pop;
  const SimSeconds window_minutes = (cfg.work_start_max - cfg.work_start_min) / 60;
  for (int i = 0; i < cfg.user_count; ++i) {
    agents::Person p;
    p.id = i;
    p.speed_ms = cfg.solo_speed_kmh / 3.6;

    const geo::Building* work = nullptr;
    switch (cfg.workplace_mode) {
      case WorkplaceMode::diversified:
        work = industrial[rng.uniform_index(industrial.size())];
        break;
      case WorkplaceMode::two:
        work = (i % 2 == 0) ? shared_a : shared_b;
        break;
      case WorkplaceMode::one:
        work = shared_a;
        break;
    }
    p.working_place = graph.nearest_node(work->centroid);

    // A home whose road anchor equals the workplace anchor is useless for a
    // trip; redraw a few times before giving up.
    bool placed = false;
    for (int attempt = 0; attempt < 100; ++attempt) {
      const geo::Building* home = residential[rng.uniform_index(residential.size())];
      const NodeId node = graph.nearest_node(home->centroid);
      if (node != p.working_place) {
        p.living_place = node;
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw ConfigError("could not place person " + std::to_string(i) +
                        ": homes collapse onto the workplace node");
    }

    p.work_start = cfg.work_start_min +
                   60 * static_cast<SimSeconds>(rng.uniform_index(
                            static_cast<std::uint64_t>(window_minutes) + 1));
    p.work_end = p.work_start + cfg.work_hours;
    p.motion.node = p.living_place;
    pop.persons.push_back(std::move(p));
  }

  const auto& ids = graph.node_ids();
  for (int i = 0; i < cfg.car_count(); ++i) {
    agents::CommonCar c;
    c.id = i;
    c.speed_ms = cfg.car_speed_kmh / 3.6;
    c.motion.node = ids[rng.uniform_index(ids.size())];
    pop.cars.push_back(c);
  }
  return pop;
}

}  // namespace shuttleswarm::harness
