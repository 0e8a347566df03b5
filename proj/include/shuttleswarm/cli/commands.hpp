#pragma once

#include <string>
#include <vector>

namespace shuttleswarm::cli {

// Exit codes: 0 success, 2 usage/config/parse error, 3 run incomplete
// (stranded persons at max_ticks), 4 validation failures.
int run_cli(const std::vector<std::string>& args);

}  // namespace shuttleswarm::cli
