#pragma once

#include <string>

#include "shuttleswarm/geo/city.hpp"

namespace shuttleswarm::geo {

struct LoadedCity {
  CityModel city;
  int skipped_features = 0;  // features without a recognized "kind" tag
};

// Reads a city from a GeoJSON FeatureCollection. Recognized features, by the
// "kind" property: "intersection" (Point; id, node_kind), "road" (LineString;
// from, to, lanes, max_speed_ms, oneway), "building" (Point or Polygon; id,
// category residential|industrial). Anything else is skipped and counted.
//
// Coordinates are planar meters by default; a top-level
// properties.coordinate_unit of "degrees" selects WGS84 input, projected to
// local planar meters with an equirectangular projection about the bbox
// center.
//
// Throws ParseError (naming the feature index / referenced id) on malformed
// input, and DomainError via CityModel::validate for an empty or broken city.
LoadedCity load_city(const std::string& geojson_text);
LoadedCity load_city_file(const std::string& path);

std::string write_city_geojson(const CityModel& city);
void write_city_geojson_file(const CityModel& city, const std::string& path);

}  // namespace shuttleswarm::geo
