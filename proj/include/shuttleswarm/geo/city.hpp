#pragma once

#include <string>
#include <vector>

#include "shuttleswarm/geo/geometry.hpp"
#include "shuttleswarm/ids.hpp"

namespace shuttleswarm::geo {

struct Building {
  enum class Category { residential, industrial };

  std::int32_t id = 0;
  Vec2 centroid;
  Category category = Category::residential;
};

struct Intersection {
  enum class Kind { plain, signal, stop };

  NodeId id = 0;
  Vec2 pos;
  Kind kind = Kind::plain;
};

struct RoadSegmentSpec {
  std::vector<Vec2> polyline;  // planar meters, >= 2 points
  NodeId from = kNoNode;
  NodeId to = kNoNode;
  int lanes = 1;
  double max_speed_ms = 13.8889;
  bool oneway = false;

  double arc_length() const;
};

struct CityModel {
  std::vector<Building> buildings;
  std::vector<RoadSegmentSpec> roads;
  std::vector<Intersection> intersections;

  // Throws DomainError when an invariant is broken: dangling road endpoint,
  // non-finite coordinate, fewer than 2 intersections or 1 road.
  void validate() const;

  bool has_intersection(NodeId id) const;
  const Intersection& intersection(NodeId id) const;

  // Stable, human-readable text form (sorted, fixed precision) for golden
  // and determinism tests.
  std::string canonical_dump() const;
};

const char* to_string(Building::Category c);
const char* to_string(Intersection::Kind k);

}  // namespace shuttleswarm::geo
