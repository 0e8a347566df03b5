#pragma once

#include <cstdint>

#include "shuttleswarm/geo/city.hpp"

namespace shuttleswarm::geo {

// Rectangular lattice city: rows*cols intersections spaced block_m apart,
// two-way single-lane roads along every lattice line, and one residential plus
// one industrial building per block at seed-determined positions. Node id at
// row r, column c is r*cols + c. Road free speed is 50 km/h.
//
// Throws DomainError unless rows >= 2, cols >= 2, block_m > 0.
CityModel generate_grid_city(int rows, int cols, double block_m, std::uint64_t seed);

}  // namespace shuttleswarm::geo
