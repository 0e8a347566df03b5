#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "shuttleswarm/cli/commands.hpp"

namespace fs = std::filesystem;
using shuttleswarm::cli::run_cli;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("shuttleswarm_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

const char* kTinyScenario = R"({
  "city": {"grid": {"rows": 4, "cols": 4, "block_m": 150.0}},
  "fleet_size": 2,
  "user_count": 6,
  "common_car_count": 2,
  "seed": 17
})";

}  // namespace

TEST_CASE("gen-city writes a deterministic file; bad arguments exit 2") {
  TempDir tmp;
  const auto out1 = tmp / "a.geojson";
  const auto out2 = tmp / "b.geojson";
  CHECK(run_cli({"gen-city", "--rows", "4", "--cols", "4", "--block", "120",
                 "--seed", "7", "--out", out1}) == 0);
  CHECK(run_cli({"gen-city", "--rows", "4", "--cols", "4", "--block", "120",
                 "--seed", "7", "--out", out2}) == 0);
  CHECK(slurp(out1) == slurp(out2));

  CHECK(run_cli({"gen-city", "--rows", "1", "--cols", "4", "--block", "120",
                 "--seed", "7", "--out", tmp / "c.geojson"}) == 2);
  CHECK(run_cli({"gen-city", "--unknown-flag", "3"}) == 2);
  CHECK(run_cli({}) == 2);
}

TEST_CASE("run: artifacts, exit codes, trace flag") {
  TempDir tmp;
  const auto cfg_path = tmp / "scenario.json";
  spit(cfg_path, kTinyScenario);

  const auto out = tmp / "run1";
  CHECK(run_cli({"run", cfg_path, "--out", out}) == 0);
  CHECK(fs::exists(out + "/report.json"));
  CHECK(fs::exists(out + "/report.csv"));
  CHECK(fs::exists(out + "/series.csv"));
  CHECK(fs::exists(out + "/ledger.csv"));
  CHECK(fs::exists(out + "/config.json"));
  CHECK(!fs::exists(out + "/events.log"));  // no --trace

  const auto traced = tmp / "run2";
  CHECK(run_cli({"run", cfg_path, "--trace", "--out", traced}) == 0);
  CHECK(fs::exists(traced + "/events.log"));

  CHECK(run_cli({"run", tmp / "missing.json", "--out", tmp / "x"}) == 2);
  spit(tmp / "bad.json", "{\"fleet_size\": -2}");
  CHECK(run_cli({"run", tmp / "bad.json", "--out", tmp / "x"}) == 2);
}

TEST_CASE("run: repeated runs are byte-identical; seeds change outputs") {
  TempDir tmp;
  const auto cfg_path = tmp / "scenario.json";
  spit(cfg_path, kTinyScenario);
  CHECK(run_cli({"run", cfg_path, "--trace", "--out", tmp / "a"}) == 0);
  CHECK(run_cli({"run", cfg_path, "--trace", "--out", tmp / "b"}) == 0);
  CHECK(slurp(tmp / "a/report.json") == slurp(tmp / "b/report.json"));
  CHECK(slurp(tmp / "a/series.csv") == slurp(tmp / "b/series.csv"));
  CHECK(slurp(tmp / "a/events.log") == slurp(tmp / "b/events.log"));

  CHECK(run_cli({"run", cfg_path, "--seed", "99", "--out", tmp / "c"}) == 0);
  CHECK(slurp(tmp / "a/report.json") != slurp(tmp / "c/report.json"));
}

TEST_CASE("run: stranded persons at max_ticks exit 3 and flag the report") {
  TempDir tmp;
  spit(tmp / "s.json", R"({
    "city": {"grid": {"rows": 4, "cols": 4, "block_m": 150.0}},
    "fleet_size": 1, "user_count": 4, "common_car_count": 0,
    "max_ticks": 20, "seed": 2
  })");
  CHECK(run_cli({"run", tmp / "s.json", "--out", tmp / "r"}) == 3);
  CHECK(slurp(tmp / "r/report.json").find("\"incomplete\": true") != std::string::npos);
}

TEST_CASE("print-config emits the resolved defaults") {
  TempDir tmp;
  spit(tmp / "s.json", "{}");
  CHECK(run_cli({"run", tmp / "s.json", "--print-config"}) == 0);
}

TEST_CASE("validate: healthy run passes, corrupted ledger names conservation") {
  TempDir tmp;
  spit(tmp / "s.json", kTinyScenario);
  const auto run_dir = tmp / "run";
  REQUIRE(run_cli({"run", tmp / "s.json", "--trace", "--out", run_dir}) == 0);
  CHECK(run_cli({"validate", run_dir}) == 0);

  // Double one billed leg cost in place.
  auto ledger = slurp(run_dir + "/ledger.csv");
  std::istringstream in(ledger);
  std::string line, rebuilt;
  bool corrupted = false;
  while (std::getline(in, line)) {
    if (!corrupted && line.find(",0,") == std::string::npos && !line.empty() &&
        line.find("cost_micros") == std::string::npos) {
      // columns: shuttle,leg,from,to,length,cost_micros,passengers
      std::vector<std::string> cells;
      std::stringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      if (cells.size() == 7 && cells[5] != "0" && !cells[6].empty()) {
        cells[5] = std::to_string(std::stoll(cells[5]) * 2);
        line.clear();
        for (std::size_t i = 0; i < cells.size(); ++i) {
          if (i) line += ',';
          line += cells[i];
        }
        corrupted = true;
      }
    }
    rebuilt += line + "\n";
  }
  REQUIRE(corrupted);
  spit(run_dir + "/ledger.csv", rebuilt);
  CHECK(run_cli({"validate", run_dir}) == 4);

  // Missing trace files are a usage error, not a violation.
  fs::remove(run_dir + "/events.log");
  CHECK(run_cli({"validate", run_dir}) == 2);
}

TEST_CASE("report prints a stored run; missing directory exits 2") {
  TempDir tmp;
  spit(tmp / "s.json", kTinyScenario);
  REQUIRE(run_cli({"run", tmp / "s.json", "--out", tmp / "run"}) == 0);
  CHECK(run_cli({"report", tmp / "run"}) == 0);
  CHECK(run_cli({"report", tmp / "nowhere"}) == 2);
}

TEST_CASE("sweep: summary rows, determinism across --jobs, bad spec exits 2") {
  TempDir tmp;
  spit(tmp / "sweep.json", R"({
    "base": {"city": {"grid": {"rows": 4, "cols": 4, "block_m": 150.0}},
             "user_count": 6, "common_car_count": 2, "seed": 3},
    "param": "fleet_size",
    "values": [1, 2],
    "seeds": [1, 2]
  })");
  CHECK(run_cli({"sweep", tmp / "sweep.json", "--out", tmp / "s1", "--jobs", "1"}) == 0);
  CHECK(run_cli({"sweep", tmp / "sweep.json", "--out", tmp / "s4", "--jobs", "4"}) == 0);
  CHECK(slurp(tmp / "s1/suite_summary.csv") == slurp(tmp / "s4/suite_summary.csv"));

  spit(tmp / "bad.json", R"({"param": "fleet_size"})");
  CHECK(run_cli({"sweep", tmp / "bad.json", "--out", tmp / "sx"}) == 2);
}
