#include <string>
#include <vector>

#include "shuttleswarm/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return shuttleswarm::cli::run_cli(args);
}
