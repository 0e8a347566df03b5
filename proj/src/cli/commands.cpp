#include "shuttleswarm/cli/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "shuttleswarm/audit/validators.hpp"
#include "shuttleswarm/engine/run.hpp"
#include "shuttleswarm/errors.hpp"
#include "shuttleswarm/geo/geojson.hpp"
#include "shuttleswarm/geo/grid_city.hpp"
#include "shuttleswarm/harness/sweep.hpp"
#include "shuttleswarm/metrics/report.hpp"

namespace shuttleswarm::cli {

namespace fs = std::filesystem;

namespace {

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("SHUTTLESWARM_SEED");
  if (!v || !*v) return std::nullopt;
  try {
    return std::stoull(v);
  } catch (...) {
    return std::nullopt;
  }
}

void print_summary(const metrics::MetricsReport& r) {
  auto opt2 = [](std::optional<double> v) {
    if (!v) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", *v);
    return std::string(buf);
  };
  std::cout << "users served        " << r.users_served << " / " << r.users_total
            << "\n"
            << "served late at work " << r.served_late_count << " (avg "
            << opt2(r.avg_late_minutes()) << " min)\n"
            << "avg travel cost     " << opt2(r.avg_travel_cost()) << "\n"
            << "avg waiting time    " << opt2(r.avg_waiting_minutes()) << " min\n"
            << "cumulative lifts    " << opt2(r.lifts_avg) << " [" << r.lifts_min
            << "-" << r.lifts_max << "]\n"
            << "total gain          " << costing::format_money_2dp(r.total_gain)
            << "\n"
            << "avg km per shuttle  " << opt2(r.avg_km_per_shuttle) << "\n";
  if (r.incomplete) std::cout << "warning: run incomplete (max_ticks reached)\n";
}

void write_run_artifacts(const engine::RunResult& result,
                         const harness::ScenarioConfig& cfg,
                         const std::string& dir, bool trace) {
  fs::create_directories(dir);
  metrics::write_text_file(dir + "/config.json", cfg.to_canonical_json());
  metrics::write_text_file(dir + "/report.json",
                           metrics::report_json_text(result.report));
  metrics::write_text_file(dir + "/report.csv",
                           metrics::report_csv_text(result.report));
  metrics::write_text_file(dir + "/series.csv",
                           metrics::series_csv_text(result.report));
  metrics::write_text_file(dir + "/ledger.csv", engine::ledger_csv_text(result));
  if (trace) {
    metrics::write_text_file(dir + "/events.log", result.events.to_text());
  }
}

int cmd_gen_city(int rows, int cols, double block, std::uint64_t seed,
                 const std::string& out) {
  const auto city = geo::generate_grid_city(rows, cols, block, seed);
  geo::write_city_geojson_file(city, out);
  std::cout << "wrote " << out << " (" << city.intersections.size() << " nodes, "
            << city.roads.size() << " roads, " << city.buildings.size()
            << " buildings)\n";
  return 0;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed_flag,
            std::string out_dir, bool trace, bool print_config) {
  auto cfg = harness::ScenarioConfig::from_file(config_path);
  if (seed_flag) {
    cfg.seed = *seed_flag;
  } else if (auto env = env_seed(); env && !cfg.seed_in_config) {
    // Env var is the lowest-precedence source: flag beats config beats env.
    cfg.seed = *env;
  }
  if (print_config) {
    std::cout << cfg.to_canonical_json();
    return 0;
  }
  const auto result = engine::run_scenario(cfg);
  if (out_dir.empty()) out_dir = "runs/" + harness::run_dir_name(cfg);
  write_run_artifacts(result, cfg, out_dir, trace);
  print_summary(result.report);
  std::cout << "artifacts in " << out_dir << "\n";
  return result.report.incomplete ? 3 : 0;
}

int cmd_sweep(const std::string& spec_path, std::string out_dir, int jobs) {
  const auto spec = harness::SweepSpec::from_file(spec_path);
  const auto suite = harness::run_experiment_suite(spec, jobs);
  if (out_dir.empty()) out_dir = "sweep-out";
  fs::create_directories(out_dir);

  for (const auto& point : suite.points) {
    for (const auto& [seed, report] : point.per_seed) {
      auto cfg = spec.config_for(point.value);
      cfg.seed = seed;
      const std::string dir = out_dir + "/" + harness::run_dir_name(cfg);
      fs::create_directories(dir);
      metrics::write_text_file(dir + "/config.json", cfg.to_canonical_json());
      metrics::write_text_file(dir + "/report.json", metrics::report_json_text(report));
      metrics::write_text_file(dir + "/report.csv", metrics::report_csv_text(report));
      metrics::write_text_file(dir + "/series.csv", metrics::series_csv_text(report));
    }
  }
  const std::string summary = harness::suite_summary_csv(spec, suite);
  metrics::write_text_file(out_dir + "/suite_summary.csv", summary);
  std::cout << summary;
  std::cout << "suite summary in " << out_dir << "/suite_summary.csv\n";
  return 0;
}

int cmd_report(const std::string& run_dir) {
  const std::string path = run_dir + "/report.json";
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: missing " << path << "\n";
    return 2;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  // Re-print the stored report in the human layout.
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    return 2;
  }
  auto num = [&](const char* key) -> std::string {
    if (!j.contains(key) || j[key].is_null()) return "-";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", j[key].get<double>());
    return buf;
  };
  std::cout << "users served        " << j.value("users_served", 0) << " / "
            << j.value("users_total", 0) << "\n"
            << "served late at work " << j.value("served_late_count", 0) << " (avg "
            << num("avg_late_minutes") << " min)\n"
            << "avg travel cost     " << num("avg_travel_cost") << "\n"
            << "avg waiting time    " << num("avg_waiting_minutes") << " min\n"
            << "cumulative lifts    " << num("lifts_avg") << " ["
            << j.value("lifts_min", 0) << "-" << j.value("lifts_max", 0) << "]\n"
            << "total gain          " << num("total_gain") << "\n"
            << "avg km per shuttle  " << num("avg_km_per_shuttle") << "\n";
  return 0;
}

int cmd_validate(const std::string& run_dir) {
  const auto violations = audit::validate_run_dir(run_dir);
  if (violations.empty()) {
    std::cout << "validation passed: " << run_dir << "\n";
    return 0;
  }
  for (const auto& v : violations) {
    std::cout << "violation [" << v.check << "] " << v.detail << "\n";
  }
  std::cout << violations.size() << " violation(s)\n";
  return 4;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"self-organizing autonomous shuttle fleet simulator"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-city", "generate a synthetic grid city");
  int rows = 8, cols = 8;
  double block = 150.0;
  std::uint64_t gen_seed = 42;
  std::string gen_out = "city.geojson";
  gen->add_option("--rows", rows, "grid rows")->check(CLI::Range(2, 10000));
  gen->add_option("--cols", cols, "grid columns")->check(CLI::Range(2, 10000));
  gen->add_option("--block", block, "block edge length in meters")
      ->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "building placement seed");
  gen->add_option("--out", gen_out, "output GeoJSON path");

  auto* run = app.add_subcommand("run", "run one scenario");
  std::string run_config;
  std::string run_out;
  bool run_trace = false;
  bool run_print_config = false;
  std::uint64_t run_seed = 0;
  run->add_option("config", run_config, "scenario config JSON")->required();
  auto* seed_opt = run->add_option("--seed", run_seed, "seed override");
  run->add_option("--out", run_out, "output directory (default runs/<hash>)");
  run->add_flag("--trace", run_trace, "write the event log");
  run->add_flag("--print-config", run_print_config,
                "print the resolved config and exit");

  auto* sweep = app.add_subcommand("sweep", "run an experiment suite");
  std::string sweep_spec;
  std::string sweep_out;
  int jobs = 1;
  sweep->add_option("spec", sweep_spec, "sweep spec JSON")->required();
  sweep->add_option("--out", sweep_out, "output directory");
  sweep->add_option("--jobs", jobs, "parallel runs")->check(CLI::Range(1, 256));

  auto* report = app.add_subcommand("report", "print the summary of a run directory");
  std::string report_dir;
  report->add_option("dir", report_dir, "run directory")->required();

  auto* validate = app.add_subcommand("validate", "replay a run's logs through the validators");
  std::string validate_dir;
  validate->add_option("dir", validate_dir, "run directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_gen_city(rows, cols, block, gen_seed, gen_out);
    if (run->parsed()) {
      return cmd_run(run_config,
                     seed_opt->count() ? std::optional<std::uint64_t>(run_seed)
                                       : std::nullopt,
                     run_out, run_trace, run_print_config);
    }
    if (sweep->parsed()) return cmd_sweep(sweep_spec, sweep_out, jobs);
    if (report->parsed()) return cmd_report(report_dir);
    if (validate->parsed()) return cmd_validate(validate_dir);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace shuttleswarm::cli
