// surfwarp command line: offline warp comparisons, closed-loop execution
// against the simulated contact environment, and multi-family sweeps.
//
// Exit codes: 0 success, 1 partial sweep failure, 2 configuration error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "surfwarp/surfwarp.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> sets;
};

fs::path resolve_out_dir(const CommonArgs& args) {
  if (!args.out_dir.empty()) return args.out_dir;
  if (const char* env = std::getenv("SURFWARP_OUT"); env && *env) return env;
  throw std::invalid_argument("no output directory (use --out or SURFWARP_OUT)");
}

json load_config_json(const CommonArgs& args) {
  json j = json::object();
  if (!args.config_path.empty()) {
    j = surfwarp::load_json_file(args.config_path);
  }
  surfwarp::apply_overrides(j, args.sets);
  return j;
}

int cmd_warp(const CommonArgs& args) {
  const fs::path out = resolve_out_dir(args);
  const auto config = surfwarp::run_config_from_json(load_config_json(args));
  const auto result = surfwarp::run_warp_case(config);
  surfwarp::write_warp_outputs(out, result);
  std::cout << "warp: " << result.warp.warped.poses.size() << " poses, report in "
            << (out / "report.json").string() << "\n";
  return 0;
}

int cmd_execute(const CommonArgs& args) {
  const fs::path out = resolve_out_dir(args);
  const json j = load_config_json(args);
  const auto config = surfwarp::run_config_from_json(j);
  surfwarp::Scenario scenario;
  if (!args.scenario_path.empty()) {
    scenario = surfwarp::load_scenario(args.scenario_path);
  } else if (j.contains("scenario")) {
    scenario = surfwarp::scenario_from_json(j.at("scenario"));
  }
  if (args.seed) scenario.seed = *args.seed;
  const auto result = surfwarp::run_execute_case(config, scenario);
  surfwarp::write_execute_outputs(out, result);
  std::cout << "execute: " << result.log.records.size() << " steps, summary in "
            << (out / "summary.json").string() << "\n";
  return result.log.fault ? 1 : 0;
}

int cmd_sweep(const CommonArgs& args) {
  const fs::path out = resolve_out_dir(args);
  auto sweep = surfwarp::sweep_config_from_json(load_config_json(args));
  if (args.seed) sweep.seed = *args.seed;
  const auto outcome = surfwarp::run_sweep(sweep, out);
  std::cout << "sweep: " << outcome.statuses.size() << " runs, table in "
            << (out / "summary_table.csv").string() << "\n";
  return outcome.any_failed ? 1 : 0;
}

void add_common(CLI::App* sub, CommonArgs& args, bool with_scenario) {
  sub->add_option("--config", args.config_path, "JSON configuration file");
  sub->add_option("--out", args.out_dir, "output directory");
  if (with_scenario) {
    sub->add_option("--scenario", args.scenario_path, "scenario JSON file");
  }
  sub->add_option("--seed", args.seed, "seed override");
  sub->add_option("--set", args.sets, "config override key=value (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surface-constrained trajectory warping and execution"};
  app.require_subcommand(1);

  CommonArgs warp_args, exec_args, sweep_args;
  CLI::App* warp_cmd = app.add_subcommand("warp", "tile and warp one configuration");
  add_common(warp_cmd, warp_args, false);
  CLI::App* exec_cmd =
      app.add_subcommand("execute", "run the online loop over a warped trajectory");
  add_common(exec_cmd, exec_args, true);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "multi-family parameter sweep");
  add_common(sweep_cmd, sweep_args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (warp_cmd->parsed()) return cmd_warp(warp_args);
    if (exec_cmd->parsed()) return cmd_execute(exec_args);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
