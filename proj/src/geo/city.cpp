#include "shuttleswarm/geo/city.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "shuttleswarm/errors.hpp"

namespace shuttleswarm::geo {

double RoadSegmentSpec::arc_length() const {
  double len = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    len += distance(polyline[i - 1], polyline[i]);
  }
  return len;
}

void CityModel::validate() const {
  if (intersections.size() < 2) {
    throw DomainError("city model needs at least 2 intersections, got " +
                      std::to_string(intersections.size()));
  }
  if (roads.empty()) {
    throw DomainError("city model has zero roads");
  }
  std::unordered_map<NodeId, int> seen;
  for (const auto& n : intersections) {
    if (!std::isfinite(n.pos.x) || !std::isfinite(n.pos.y)) {
      throw DomainError("intersection " + std::to_string(n.id) +
                        " has non-finite coordinates");
    }
    if (++seen[n.id] > 1) {
      throw DomainError("duplicate intersection id " + std::to_string(n.id));
    }
  }
  for (std::size_t i = 0; i < roads.size(); ++i) {
    const auto& r = roads[i];
    if (r.polyline.size() < 2) {
      throw DomainError("road " + std::to_string(i) + " has fewer than 2 points");
    }
    for (const auto& p : r.polyline) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw DomainError("road " + std::to_string(i) + " has non-finite coordinates");
      }
    }
    if (!seen.count(r.from)) {
      throw DomainError("road " + std::to_string(i) +
                        " references missing intersection id " + std::to_string(r.from));
    }
    if (!seen.count(r.to)) {
      throw DomainError("road " + std::to_string(i) +
                        " references missing intersection id " + std::to_string(r.to));
    }
    if (r.lanes < 1) {
      throw DomainError("road " + std::to_string(i) + " has lanes < 1");
    }
    if (!(r.max_speed_ms > 0.0)) {
      throw DomainError("road " + std::to_string(i) + " has non-positive max speed");
    }
  }
  for (const auto& b : buildings) {
    if (!std::isfinite(b.centroid.x) || !std::isfinite(b.centroid.y)) {
      throw DomainError("building " + std::to_string(b.id) +
                        " has non-finite coordinates");
    }
  }
}

bool CityModel::has_intersection(NodeId id) const {
  return std::any_of(intersections.begin(), intersections.end(),
                     [&](const Intersection& n) { return n.id == id; });
}

const Intersection& CityModel::intersection(NodeId id) const {
  for (const auto& n : intersections) {
    if (n.id == id) return n;
  }
  throw DomainError("unknown intersection id " + std::to_string(id));
}

const char* to_string(Building::Category c) {
  return c == Building::Category::residential ? "residential" : "industrial";
}

const char* to_string(Intersection::Kind k) {
  switch (k) {
    case Intersection::Kind::signal: return "signal";
    case Intersection::Kind::stop: return "stop";
    default: return "plain";
  }
}

namespace {

void append_f(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  out += buf;
}

}  // namespace

std::string CityModel::canonical_dump() const {
  auto nodes = intersections;
  std::sort(nodes.begin(), nodes.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  auto blds = buildings;
  std::sort(blds.begin(), blds.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  std::string out;
  out.reserve(64 * (nodes.size() + roads.size() + blds.size()));
  for (const auto& n : nodes) {
    out += "node ";
    out += std::to_string(n.id);
    out += ' ';
    append_f(out, n.pos.x);
    out += ' ';
    append_f(out, n.pos.y);
    out += ' ';
    out += to_string(n.kind);
    out += '\n';
  }
  for (std::size_t i = 0; i < roads.size(); ++i) {
    const auto& r = roads[i];
    out += "road ";
    out += std::to_string(i);
    out += ' ';
    out += std::to_string(r.from);
    out += ' ';
    out += std::to_string(r.to);
    out += ' ';
    out += std::to_string(r.lanes);
    out += ' ';
    append_f(out, r.max_speed_ms);
    out += r.oneway ? " oneway " : " twoway ";
    append_f(out, r.arc_length());
    out += '\n';
  }
  for (const auto& b : blds) {
    out += "building ";
    out += std::to_string(b.id);
    out += ' ';
    append_f(out, b.centroid.x);
    out += ' ';
    append_f(out, b.centroid.y);
    out += ' ';
    out += to_string(b.category);
    out += '\n';
  }
  return out;
}

}  // namespace shuttleswarm::geo
