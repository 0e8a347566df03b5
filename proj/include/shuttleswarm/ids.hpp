#pragma once

#include <cstdint>

namespace shuttleswarm {

using NodeId = std::int32_t;    // intersection id, as given by the city model
using EdgeId = std::int32_t;    // dense index into RoadGraph::edges
using PersonId = std::int32_t;
using ShuttleId = std::int32_t;
using CarId = std::int32_t;
using Tick = std::int64_t;
using SimSeconds = std::int64_t;  // seconds since 00:00 of the simulated day

inline constexpr NodeId kNoNode = -1;
inline constexpr EdgeId kNoEdge = -1;

}  // namespace shuttleswarm
