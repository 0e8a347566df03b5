#include "shuttleswarm/geo/geojson.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "shuttleswarm/errors.hpp"

namespace shuttleswarm::geo {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr double kEarthRadiusM = 6371000.0;

std::string feat_name(std::size_t index, const json& props) {
  std::string name = "feature " + std::to_string(index);
  if (props.contains("id")) name += " (id " + props["id"].dump() + ")";
  return name;
}

Vec2 read_point(const json& coords, std::size_t index) {
  if (!coords.is_array() || coords.size() < 2 || !coords[0].is_number() ||
      !coords[1].is_number()) {
    throw ParseError("feature " + std::to_string(index) + ": bad point coordinates");
  }
  return {coords[0].get<double>(), coords[1].get<double>()};
}

Vec2 polygon_centroid(const std::vector<Vec2>& ring) {
  // Shoelace centroid; falls back to the vertex mean for degenerate rings.
  double a2 = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    const double w = ring[i].x * ring[i + 1].y - ring[i + 1].x * ring[i].y;
    a2 += w;
    cx += (ring[i].x + ring[i + 1].x) * w;
    cy += (ring[i].y + ring[i + 1].y) * w;
  }
  if (std::fabs(a2) < 1e-12) {
    Vec2 mean{0, 0};
    for (const auto& p : ring) mean = mean + p;
    return {mean.x / ring.size(), mean.y / ring.size()};
  }
  return {cx / (3.0 * a2), cy / (3.0 * a2)};
}

}  // namespace

LoadedCity load_city(const std::string& geojson_text) {
  json doc;
  try {
    doc = json::parse(geojson_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("GeoJSON parse error: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw ParseError("GeoJSON document is not a FeatureCollection");
  }

  bool degrees = false;
  if (doc.contains("properties") && doc["properties"].is_object()) {
    const auto unit = doc["properties"].value("coordinate_unit", "meters");
    if (unit == "degrees") {
      degrees = true;
    } else if (unit != "meters") {
      throw ParseError("unknown coordinate_unit '" + unit + "'");
    }
  }

  LoadedCity out;
  CityModel& city = out.city;

  struct RawRoad {
    RoadSegmentSpec spec;
    std::size_t feature_index;
  };
  std::vector<RawRoad> roads;

  const auto& features = doc["features"];
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& f = features[i];
    if (!f.is_object() || !f.contains("geometry") || !f["geometry"].is_object()) {
      throw ParseError("feature " + std::to_string(i) + ": missing geometry");
    }
    const json props = f.value("properties", json::object());
    const std::string kind = props.value("kind", "");
    const auto& geom = f["geometry"];
    const std::string gtype = geom.value("type", "");

    if (kind == "intersection") {
      if (gtype != "Point") {
        throw ParseError(feat_name(i, props) + ": intersection must be a Point");
      }
      if (!props.contains("id") || !props["id"].is_number_integer()) {
        throw ParseError("feature " + std::to_string(i) + ": intersection without integer id");
      }
      Intersection n;
      n.id = props["id"].get<NodeId>();
      n.pos = read_point(geom["coordinates"], i);
      const std::string k = props.value("node_kind", "plain");
      if (k == "signal") {
        n.kind = Intersection::Kind::signal;
      } else if (k == "stop") {
        n.kind = Intersection::Kind::stop;
      } else if (k == "plain") {
        n.kind = Intersection::Kind::plain;
      } else {
        throw ParseError(feat_name(i, props) + ": unknown node_kind '" + k + "'");
      }
      city.intersections.push_back(n);
    } else if (kind == "road") {
      if (gtype != "LineString") {
        throw ParseError("feature " + std::to_string(i) + ": road must be a LineString");
      }
      if (!props.contains("from") || !props.contains("to")) {
        throw ParseError("feature " + std::to_string(i) + ": road without from/to ids");
      }
      RawRoad r;
      r.feature_index = i;
      r.spec.from = props["from"].get<NodeId>();
      r.spec.to = props["to"].get<NodeId>();
      r.spec.lanes = props.value("lanes", 1);
      r.spec.max_speed_ms = props.value("max_speed_ms", 13.8889);
      r.spec.oneway = props.value("oneway", false);
      for (const auto& c : geom["coordinates"]) {
        r.spec.polyline.push_back(read_point(c, i));
      }
      if (r.spec.polyline.size() < 2) {
        throw ParseError("feature " + std::to_string(i) + ": road with fewer than 2 points");
      }
      roads.push_back(std::move(r));
    } else if (kind == "building") {
      if (!props.contains("id") || !props["id"].is_number_integer()) {
        throw ParseError("feature " + std::to_string(i) + ": building without integer id");
      }
      Building b;
      b.id = props["id"].get<std::int32_t>();
      const std::string cat = props.value("category", "");
      if (cat == "residential") {
        b.category = Building::Category::residential;
      } else if (cat == "industrial") {
        b.category = Building::Category::industrial;
      } else {
        throw ParseError(feat_name(i, props) + ": building category must be residential or industrial");
      }
      if (gtype == "Point") {
        b.centroid = read_point(geom["coordinates"], i);
      } else if (gtype == "Polygon") {
        const auto& rings = geom["coordinates"];
        if (!rings.is_array() || rings.empty() || !rings[0].is_array() || rings[0].size() < 3) {
          throw ParseError(feat_name(i, props) + ": malformed polygon");
        }
        std::vector<Vec2> ring;
        for (const auto& c : rings[0]) ring.push_back(read_point(c, i));
        b.centroid = polygon_centroid(ring);
      } else {
        throw ParseError(feat_name(i, props) + ": building must be a Point or Polygon");
      }
      city.buildings.push_back(b);
    } else {
      ++out.skipped_features;
    }
  }

  for (const auto& r : roads) {
    if (!city.has_intersection(r.spec.from)) {
      throw ParseError("feature " + std::to_string(r.feature_index) +
                       ": road references missing intersection id " +
                       std::to_string(r.spec.from));
    }
    if (!city.has_intersection(r.spec.to)) {
      throw ParseError("feature " + std::to_string(r.feature_index) +
                       ": road references missing intersection id " +
                       std::to_string(r.spec.to));
    }
    city.roads.push_back(r.spec);
  }

  if (city.roads.empty()) {
    throw DomainError("city document contains zero roads");
  }

  if (degrees) {
    // Local equirectangular projection about the bbox center.
    double lon_min = 1e9, lon_max = -1e9, lat_min = 1e9, lat_max = -1e9;
    auto scan = [&](Vec2 p) {
      lon_min = std::min(lon_min, p.x);
      lon_max = std::max(lon_max, p.x);
      lat_min = std::min(lat_min, p.y);
      lat_max = std::max(lat_max, p.y);
    };
    for (const auto& n : city.intersections) scan(n.pos);
    for (const auto& b : city.buildings) scan(b.centroid);
    for (const auto& r : city.roads) {
      for (const auto& p : r.polyline) scan(p);
    }
    const double lon0 = 0.5 * (lon_min + lon_max);
    const double lat0 = 0.5 * (lat_min + lat_max);
    const double deg = 3.141592653589793238462643383279502884 / 180.0;
    const double kx = kEarthRadiusM * deg * std::cos(lat0 * deg);
    const double ky = kEarthRadiusM * deg;
    auto project = [&](Vec2 p) -> Vec2 { return {(p.x - lon0) * kx, (p.y - lat0) * ky}; };
    for (auto& n : city.intersections) n.pos = project(n.pos);
    for (auto& b : city.buildings) b.centroid = project(b.centroid);
    for (auto& r : city.roads) {
      for (auto& p : r.polyline) p = project(p);
    }
  }

  city.validate();
  return out;
}

LoadedCity load_city_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open city file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_city(ss.str());
}

std::string write_city_geojson(const CityModel& city) {
  ordered_json doc;
  doc["type"] = "FeatureCollection";
  doc["properties"] = ordered_json{{"coordinate_unit", "meters"}};
  ordered_json features = ordered_json::array();

  for (const auto& n : city.intersections) {
    ordered_json f;
    f["type"] = "Feature";
    f["properties"] = ordered_json{{"kind", "intersection"},
                                   {"id", n.id},
                                   {"node_kind", to_string(n.kind)}};
    f["geometry"] = ordered_json{{"type", "Point"},
                                 {"coordinates", ordered_json::array({n.pos.x, n.pos.y})}};
    features.push_back(std::move(f));
  }
  for (const auto& r : city.roads) {
    ordered_json coords = ordered_json::array();
    for (const auto& p : r.polyline) coords.push_back(ordered_json::array({p.x, p.y}));
    ordered_json f;
    f["type"] = "Feature";
    f["properties"] = ordered_json{{"kind", "road"},
                                   {"from", r.from},
                                   {"to", r.to},
                                   {"lanes", r.lanes},
                                   {"max_speed_ms", r.max_speed_ms},
                                   {"oneway", r.oneway}};
    f["geometry"] = ordered_json{{"type", "LineString"}, {"coordinates", std::move(coords)}};
    features.push_back(std::move(f));
  }
  for (const auto& b : city.buildings) {
    ordered_json f;
    f["type"] = "Feature";
    f["properties"] = ordered_json{{"kind", "building"},
                                   {"id", b.id},
                                   {"category", to_string(b.category)}};
    f["geometry"] = ordered_json{{"type", "Point"},
                                 {"coordinates", ordered_json::array({b.centroid.x, b.centroid.y})}};
    features.push_back(std::move(f));
  }
  doc["features"] = std::move(features);
  return doc.dump(2) + "\n";
}

void write_city_geojson_file(const CityModel& city, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write city file: " + path);
  out << write_city_geojson(city);
}

}  // namespace shuttleswarm::geo
