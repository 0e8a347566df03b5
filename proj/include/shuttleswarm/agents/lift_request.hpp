#pragma once

#include "shuttleswarm/ids.hpp"

namespace shuttleswarm::agents {

struct LiftRequest {
  enum class Direction { to_work, to_home };

  PersonId person = -1;
  NodeId origin = kNoNode;
  NodeId destination = kNoNode;
  SimSeconds issue = 0;
  SimSeconds expiry = 0;  // issue + wait timeout
  Direction direction = Direction::to_work;
};

inline const char* to_string(LiftRequest::Direction d) {
  return d == LiftRequest::Direction::to_work ? "to_work" : "to_home";
}

}  // namespace shuttleswarm::agents
