#include "shuttleswarm/geo/grid_city.hpp"

#include "shuttleswarm/engine/rng.hpp"
#include "shuttleswarm/errors.hpp"

namespace shuttleswarm::geo {

namespace {
constexpr double kGridSpeedMs = 13.8889;  // 50 km/h
}

CityModel generate_grid_city(int rows, int cols, double block_m, std::uint64_t seed) {
  if (rows < 2 || cols < 2) {
    throw DomainError("grid city needs rows >= 2 and cols >= 2");
  }
  if (!(block_m > 0.0)) {
    throw DomainError("grid city needs block_m > 0");
  }

  CityModel city;
  city.intersections.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      Intersection n;
      n.id = r * cols + c;
      n.pos = {c * block_m, r * block_m};
      n.kind = Intersection::Kind::plain;
      city.intersections.push_back(n);
    }
  }

  auto add_road = [&](NodeId a, NodeId b) {
    RoadSegmentSpec road;
    road.from = a;
    road.to = b;
    road.polyline = {city.intersections[a].pos, city.intersections[b].pos};
    road.lanes = 1;
    road.max_speed_ms = kGridSpeedMs;
    road.oneway = false;
    city.roads.push_back(road);
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c + 1 < cols; ++c) {
      add_road(r * cols + c, r * cols + c + 1);
    }
  }
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r + 1 < rows; ++r) {
      add_road(r * cols + c, (r + 1) * cols + c);
    }
  }

  // Two buildings per block, kept off the block border so that each maps to a
  // unique nearest intersection only by geometry, not by construction.
  engine::SeededRng rng(seed);
  std::int32_t next_building = 0;
  for (int r = 0; r + 1 < rows; ++r) {
    for (int c = 0; c + 1 < cols; ++c) {
      const double x0 = c * block_m;
      const double y0 = r * block_m;
      auto place = [&](Building::Category cat) {
        Building b;
        b.id = next_building++;
        b.centroid = {x0 + block_m * rng.uniform(0.1, 0.9),
                      y0 + block_m * rng.uniform(0.1, 0.9)};
        b.category = cat;
        city.buildings.push_back(b);
      };
      place(Building::Category::residential);
      place(Building::Category::industrial);
    }
  }

  city.validate();
  return city;
}

}  // namespace shuttleswarm::geo
