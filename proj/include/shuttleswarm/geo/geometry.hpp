#pragma once

#include <cmath>

#include "shuttleswarm/errors.hpp"

namespace shuttleswarm::geo {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }

/// Unsigned angle in degrees, in [0, 180], at vertex `at` between the rays
/// at->final_target and at->candidate. Used by the admission angle filter.
/// Throws DomainError when at == final_target (the reference ray is undefined;
/// callers must treat the candidate as unfilterable and reject it).
inline double bearing_angle_deg(Vec2 at, Vec2 final_target, Vec2 candidate) {
  const Vec2 u = final_target - at;
  const Vec2 v = candidate - at;
  const double nu = norm(u);
  if (nu == 0.0) {
    throw DomainError("bearing_angle: current location equals final target");
  }
  const double nv = norm(v);
  if (nv == 0.0) return 0.0;  // candidate at the vertex: no deviation
  // atan2 of cross/dot is numerically stable near 0 and 180 degrees.
  const double cross = u.x * v.y - u.y * v.x;
  const double dot = u.x * v.x + u.y * v.y;
  const double rad = std::atan2(std::fabs(cross), dot);
  return rad * 180.0 / 3.141592653589793238462643383279502884;
}

}  // namespace shuttleswarm::geo
