#pragma once

// Case runners behind the CLI subcommands: single warp comparisons, closed
// loop executions, and multi-family sweeps with the summary table.

#include <filesystem>
#include <future>
#include <string>
#include <vector>

#include <json.hpp>

#include "surfwarp/config.hpp"
#include "surfwarp/io.hpp"
#include "surfwarp/metrics.hpp"
#include "surfwarp/offline_warp.hpp"
#include "surfwarp/online_exec.hpp"

namespace surfwarp {

struct WarpCaseResult {
  WarpResult warp;
  ContinuityReport tiled_report;
  ContinuityReport warped_report;
  int collisions_tiled = 0;
  int collisions_warped = 0;
  double jacobian_min = 1.0;
  double max_step_applied = 0.0;
  double step_cap_abs = 0.0;
};

inline WarpCaseResult run_warp_case(const RunConfig& config) {
  config.validate();
  const GuideCurve guide = build_guide(config.surface, config.guide.x_start,
                                       config.guide.x_end, config.guide.samples);
  DeformTrace trace;
  WarpCaseResult result;
  result.warp = warp(config.primitive, guide, config.surface, config.deform,
                     config.effective_tile_tol(), &trace);

  const double threshold = config.metrics.bad_step_threshold_deg * kPi / 180.0;
  result.tiled_report = continuity_report(result.warp.tiled.poses, threshold);
  result.warped_report = continuity_report(result.warp.warped.poses, threshold);
  result.collisions_tiled =
      collision_count(result.warp.tiled.poses, config.primitive.tool_length,
                      config.surface, config.metrics.collision_tol,
                      config.metrics.collision_samples);
  result.collisions_warped =
      collision_count(result.warp.warped.poses, config.primitive.tool_length,
                      config.surface, config.metrics.collision_tol,
                      config.metrics.collision_samples);
  result.max_step_applied = trace.max_step_applied;
  result.step_cap_abs = trace.step_cap_abs;
  if (config.metrics.check_jacobian && trace.iterations_run > 0) {
    const double min_spacing = detail::min_in_tile_spacing(
        trace.anchors.front(), result.warp.tiled.tile_id);
    result.jacobian_min =
        min_probe_jacobian(trace, config.deform.lambda_tip, min_spacing,
                           config.deform.smoothing_window);
  }
  return result;
}

inline nlohmann::json warp_case_report(const WarpCaseResult& r) {
  const double deg = 180.0 / kPi;
  nlohmann::json j;
  j["n_steps"] = r.tiled_report.n_steps;
  j["tiled"] = {{"dtheta_p95_deg", r.tiled_report.p95 * deg},
                {"bad_rate", r.tiled_report.bad_rate},
                {"collisions", r.collisions_tiled}};
  j["warped"] = {{"dtheta_p95_deg", r.warped_report.p95 * deg},
                 {"bad_rate", r.warped_report.bad_rate},
                 {"collisions", r.collisions_warped}};
  j["delta_dtheta_p95_deg"] = (r.warped_report.p95 - r.tiled_report.p95) * deg;
  j["delta_bad_rate"] = r.tiled_report.bad_rate - r.warped_report.bad_rate;
  j["jacobian_min"] = r.jacobian_min;
  j["max_step_applied"] = r.max_step_applied;
  j["step_cap_abs"] = r.step_cap_abs;
  return j;
}

/// Writes tiled.csv, warped.csv and report.json into out_dir.
inline void write_warp_outputs(const std::filesystem::path& out_dir,
                               const WarpCaseResult& r) {
  std::filesystem::create_directories(out_dir);
  write_trajectory_csv(out_dir / "tiled.csv", r.warp.tiled.poses,
                       r.warp.tiled.tile_id, r.warp.tiled.contact_flags);
  write_trajectory_csv(out_dir / "warped.csv", r.warp.warped.poses,
                       r.warp.tiled.tile_id, r.warp.warped.contact_flags);
  write_json(out_dir / "report.json", warp_case_report(r));
}

// ---------------------------------------------------------------------------
// Execution case

struct ExecuteCaseResult {
  ExecutionLog log;
  double max_deviation = 0.0;  // post-filter axis deviation from warp, radians
  int recovery_step = -1;      // first in-deadband step at/after the last event
  double deadband_fraction = 0.0;
};

inline ExecuteCaseResult run_execute_case(const RunConfig& config,
                                          const Scenario& scenario) {
  config.validate();
  const GuideCurve guide = build_guide(config.surface, config.guide.x_start,
                                       config.guide.x_end, config.guide.samples);
  const WarpResult wr = warp(config.primitive, guide, config.surface,
                             config.deform, config.effective_tile_tol());
  scenario.validate(wr.warped.poses.size());
  ContactEnv env(config.surface, scenario);

  ExecuteCaseResult result;
  result.log = execute_trajectory(wr.warped, env, config.exec);

  int last_event_step = -1;
  for (const auto& ev : scenario.events) {
    last_event_step = std::max(last_event_step, ev.at_step);
  }
  std::size_t deadband_count = 0;
  for (const auto& rec : result.log.records) {
    const double dev =
        angle_between(rec.step.projected.rotation * config.exec.e_c,
                      wr.warped.poses[static_cast<std::size_t>(rec.k)].rotation *
                          config.exec.e_c);
    result.max_deviation = std::max(result.max_deviation, dev);
    const bool in_deadband = std::abs(rec.step.contact_error) <= config.exec.deadband;
    if (in_deadband) {
      ++deadband_count;
      if (result.recovery_step < 0 && rec.k >= last_event_step && last_event_step >= 0) {
        result.recovery_step = rec.k;
      }
    }
  }
  if (!result.log.records.empty()) {
    result.deadband_fraction = static_cast<double>(deadband_count) /
                               static_cast<double>(result.log.records.size());
  }
  return result;
}

/// Writes execution.csv and summary.json into out_dir.
inline void write_execute_outputs(const std::filesystem::path& out_dir,
                                  const ExecuteCaseResult& r) {
  std::filesystem::create_directories(out_dir);
  write_execution_csv(out_dir / "execution.csv", r.log);
  nlohmann::json j;
  j["max_deviation_deg"] = r.max_deviation * 180.0 / kPi;
  j["recovery_step"] = r.recovery_step;
  j["deadband_fraction"] = r.deadband_fraction;
  j["steps"] = r.log.records.size();
  j["fault"] = r.log.fault;
  if (r.log.fault) j["fault_message"] = r.log.fault_message;
  write_json(out_dir / "summary.json", j);
}

// ---------------------------------------------------------------------------
// Sweep

struct SweepRunStatus {
  SurfaceFamily family = SurfaceFamily::Sin;
  std::size_t grid_index = 0;
  bool ok = false;
  std::string message;  // error text for failed runs
};

struct SweepOutcome {
  std::vector<PairSummary> rows;       // one per family, in config order
  std::vector<SweepRunStatus> statuses;
  std::vector<WarpCaseResult> cases;   // successful runs, sweep order
  bool any_failed = false;
};

inline RunConfig grid_run_config(const SweepConfig& sweep, SurfaceFamily family,
                                 const GridPoint& point) {
  RunConfig config = sweep.base;
  config.surface.family = family;
  config.surface.amplitude = point.amplitude;
  config.surface.frequency = point.frequency;
  config.surface.scale = point.scale;
  return config;
}

/// Runs every (family x grid point) pair, writes per-run artifacts under
/// out_dir/<family>_<index>/ plus summary_table.csv and summary_meta.json.
/// Runs execute in a worker pool; aggregation is ordered by (family, index).
inline SweepOutcome run_sweep(const SweepConfig& sweep,
                              const std::filesystem::path& out_dir) {
  sweep.validate();
  std::filesystem::create_directories(out_dir);

  struct Job {
    SurfaceFamily family;
    std::size_t index;
    RunConfig config;
  };
  std::vector<Job> jobs;
  for (SurfaceFamily family : sweep.families) {
    const auto& grid = sweep.grids.at(family);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      jobs.push_back({family, i, grid_run_config(sweep, family, grid[i])});
    }
  }

  std::vector<std::future<WarpCaseResult>> futures;
  futures.reserve(jobs.size());
  for (const Job& job : jobs) {
    futures.push_back(std::async(std::launch::async,
                                 [config = job.config] { return run_warp_case(config); }));
  }

  SweepOutcome outcome;
  std::map<SurfaceFamily, std::vector<PairMetrics>> by_family;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    SweepRunStatus status;
    status.family = jobs[i].family;
    status.grid_index = jobs[i].index;
    try {
      WarpCaseResult r = futures[i].get();
      const std::filesystem::path run_dir =
          out_dir / (std::string(family_name(jobs[i].family)) + "_" +
                     std::to_string(jobs[i].index));
      write_warp_outputs(run_dir, r);
      by_family[jobs[i].family].push_back({r.tiled_report, r.warped_report,
                                           r.collisions_tiled, r.collisions_warped});
      status.ok = true;
      outcome.cases.push_back(std::move(r));
    } catch (const std::exception& ex) {
      status.ok = false;
      status.message = ex.what();
      outcome.any_failed = true;
    }
    outcome.statuses.push_back(status);
  }

  for (SurfaceFamily family : sweep.families) {
    const auto it = by_family.find(family);
    if (it != by_family.end() && !it->second.empty()) {
      outcome.rows.push_back(summarize_pairs(it->second, family));
    }
  }

  write_summary_table_csv(out_dir / "summary_table.csv", outcome.rows);

  nlohmann::json meta;
  meta["bad_rate_aggregation"] = "step_weighted_pooled";
  meta["percentile_method"] = "nearest_rank";
  meta["bad_step_threshold_deg"] = sweep.base.metrics.bad_step_threshold_deg;
  meta["seed"] = sweep.seed;
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& status : outcome.statuses) {
    runs.push_back({{"family", family_name(status.family)},
                    {"grid_index", status.grid_index},
                    {"status", status.ok ? "ok" : "error"},
                    {"message", status.message}});
  }
  meta["runs"] = runs;
  write_json(out_dir / "summary_meta.json", meta);
  return outcome;
}

}  // namespace surfwarp
