#pragma once

// Run and sweep configuration: JSON schema with defaults, plus dotted-path
// `key=value` overrides for the CLI.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "surfwarp/metrics.hpp"
#include "surfwarp/online_exec.hpp"
#include "surfwarp/primitive.hpp"
#include "surfwarp/surface.hpp"

namespace surfwarp {

struct GuideSpec {
  double x_start = -0.8;
  double x_end = 0.8;
  std::size_t samples = 1601;
};

struct MetricsParams {
  double bad_step_threshold_deg = 10.0;
  double collision_tol = 1e-3;       // meters
  int collision_samples = kCollisionSamplesProduction;
  bool check_jacobian = true;
};

struct RunConfig {
  Surface surface;
  GuideSpec guide;
  PrimitiveConfig primitive;
  DeformParams deform;
  ExecParams exec;
  MetricsParams metrics;
  std::optional<double> tile_tol;  // default: half the guide sample spacing

  double effective_tile_tol() const {
    if (tile_tol) return *tile_tol;
    return 0.5 * (guide.x_end - guide.x_start) /
           static_cast<double>(guide.samples - 1);
  }

  void validate() const {
    primitive.validate();
    deform.validate();
    exec.validate();
    if (!(guide.x_end > guide.x_start) || guide.samples < 2) {
      throw std::invalid_argument("RunConfig: invalid guide range");
    }
    if (metrics.collision_samples < 2) {
      throw std::invalid_argument("RunConfig: collision_samples < 2");
    }
    if (!(metrics.collision_tol > 0.0)) {
      throw std::invalid_argument("RunConfig: collision_tol <= 0");
    }
  }
};

/// One grid point of a family sweep: the surface parameters that vary.
struct GridPoint {
  double amplitude = 0.05;
  double frequency = 1.0;  // sin/cos
  double scale = 1.0;      // exp
};

struct SweepConfig {
  RunConfig base;
  std::vector<SurfaceFamily> families;
  std::map<SurfaceFamily, std::vector<GridPoint>> grids;
  std::uint64_t seed = 0;

  void validate() const {
    base.validate();
    if (families.empty()) {
      throw std::invalid_argument("SweepConfig: no families");
    }
    for (SurfaceFamily f : families) {
      const auto it = grids.find(f);
      if (it == grids.end() || it->second.empty()) {
        throw std::invalid_argument(std::string("SweepConfig: empty grid for ") +
                                    family_name(f));
      }
    }
  }
};

// ---------------------------------------------------------------------------
// JSON parsing

namespace detail {

inline void parse_surface(const nlohmann::json& j, Surface& s) {
  if (j.contains("family")) s.family = family_from_string(j.at("family"));
  s.amplitude = j.value("amplitude", s.amplitude);
  s.frequency = j.value("frequency", s.frequency);
  s.scale = j.value("scale", s.scale);
  s.height_offset = j.value("height_offset", s.height_offset);
}

inline void parse_run_config(const nlohmann::json& j, RunConfig& c) {
  if (j.contains("surface")) parse_surface(j.at("surface"), c.surface);
  if (j.contains("guide")) {
    const auto& g = j.at("guide");
    c.guide.x_start = g.value("x_start", c.guide.x_start);
    c.guide.x_end = g.value("x_end", c.guide.x_end);
    c.guide.samples = g.value("samples", c.guide.samples);
  }
  if (j.contains("primitive")) {
    const auto& p = j.at("primitive");
    c.primitive.waypoint_count = p.value("waypoints", c.primitive.waypoint_count);
    c.primitive.dwell_fraction = p.value("dwell_fraction", c.primitive.dwell_fraction);
    c.primitive.lift_height = p.value("lift_height", c.primitive.lift_height);
    c.primitive.period_length = p.value("period_length", c.primitive.period_length);
    c.primitive.tool_length = p.value("tool_length", c.primitive.tool_length);
  }
  if (j.contains("deform")) {
    const auto& d = j.at("deform");
    c.deform.iterations = d.value("iterations", c.deform.iterations);
    c.deform.step_cap = d.value("step_cap", c.deform.step_cap);
    c.deform.lambda_tip = d.value("lambda_tip", c.deform.lambda_tip);
    c.deform.lambda_base = d.value("lambda_base", c.deform.lambda_base);
    c.deform.target_clearance = d.value("target_clearance", c.deform.target_clearance);
    c.deform.smoothing_window = d.value("smoothing_window", c.deform.smoothing_window);
    c.deform.axis_eps = d.value("axis_eps", c.deform.axis_eps);
  }
  if (j.contains("exec")) {
    const auto& e = j.at("exec");
    c.exec.force_target = e.value("force_target", c.exec.force_target);
    c.exec.deadband = e.value("deadband", c.exec.deadband);
    c.exec.kappa_p = e.value("kappa_p", c.exec.kappa_p);
    c.exec.delta_max = e.value("delta_max", c.exec.delta_max);
    c.exec.kappa_r = e.value("kappa_r", c.exec.kappa_r);
    c.exec.delta_max_fsr = e.value("delta_max_fsr", c.exec.delta_max_fsr);
    c.exec.cone_half_angle = e.value("cone_half_angle", c.exec.cone_half_angle);
    c.exec.delta_max_cone = e.value("delta_max_cone", c.exec.delta_max_cone);
  }
  if (j.contains("metrics")) {
    const auto& m = j.at("metrics");
    c.metrics.bad_step_threshold_deg =
        m.value("bad_step_threshold_deg", c.metrics.bad_step_threshold_deg);
    c.metrics.collision_tol = m.value("collision_tol", c.metrics.collision_tol);
    c.metrics.collision_samples = m.value("collision_samples", c.metrics.collision_samples);
    c.metrics.check_jacobian = m.value("check_jacobian", c.metrics.check_jacobian);
  }
  if (j.contains("tile_tol")) c.tile_tol = j.at("tile_tol").get<double>();
}

inline std::vector<GridPoint> parse_grid(const nlohmann::json& j) {
  std::vector<GridPoint> grid;
  for (const auto& jp : j) {
    GridPoint p;
    p.amplitude = jp.value("amplitude", p.amplitude);
    p.frequency = jp.value("frequency", p.frequency);
    p.scale = jp.value("scale", p.scale);
    grid.push_back(p);
  }
  return grid;
}

}  // namespace detail

/// Default family grids: curvature on sin/cos/parabolic high enough that
/// direct tiling shows double-digit-degree steps between periods, exp
/// moderate, cubic near flat.
inline SweepConfig default_sweep_config() {
  SweepConfig sweep;
  sweep.families = {SurfaceFamily::Cos, SurfaceFamily::Cubic, SurfaceFamily::Exp,
                    SurfaceFamily::Parabolic, SurfaceFamily::Sin};
  sweep.grids[SurfaceFamily::Sin] = {{0.05, 7.0, 1.0},
                                     {0.06, 7.0, 1.0},
                                     {0.07, 7.0, 1.0},
                                     {0.08, 7.0, 1.0}};
  sweep.grids[SurfaceFamily::Cos] = {{0.05, 7.0, 1.0},
                                     {0.06, 7.0, 1.0},
                                     {0.07, 7.0, 1.0},
                                     {0.08, 7.0, 1.0}};
  sweep.grids[SurfaceFamily::Exp] = {{0.08, 1.0, 8.0},
                                     {0.10, 1.0, 8.0},
                                     {0.12, 1.0, 8.0},
                                     {0.14, 1.0, 8.0}};
  sweep.grids[SurfaceFamily::Parabolic] = {{0.7, 1.0, 1.0},
                                           {0.8, 1.0, 1.0},
                                           {0.9, 1.0, 1.0},
                                           {1.0, 1.0, 1.0}};
  sweep.grids[SurfaceFamily::Cubic] = {{0.008, 1.0, 1.0},
                                       {0.010, 1.0, 1.0},
                                       {0.012, 1.0, 1.0},
                                       {0.014, 1.0, 1.0}};
  return sweep;
}

inline nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file: " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("malformed config: ") + ex.what());
  }
  return j;
}

/// Apply `a.b.c=value` overrides; values parse as JSON scalars, falling back
/// to strings.
inline void apply_overrides(nlohmann::json& j,
                            const std::vector<std::string>& sets) {
  for (const std::string& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("bad --set (expected key=value): " + kv);
    }
    const std::string key = kv.substr(0, eq);
    const std::string raw = kv.substr(eq + 1);
    nlohmann::json value;
    try {
      value = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::exception&) {
      value = raw;
    }
    nlohmann::json* node = &j;
    std::size_t start = 0;
    while (true) {
      const auto dot = key.find('.', start);
      const std::string part = key.substr(start, dot - start);
      if (part.empty()) {
        throw std::invalid_argument("bad --set key: " + key);
      }
      if (dot == std::string::npos) {
        (*node)[part] = value;
        break;
      }
      node = &(*node)[part];
      start = dot + 1;
    }
  }
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    detail::parse_run_config(j, c);
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("malformed config: ") + ex.what());
  }
  c.validate();
  return c;
}

inline SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  SweepConfig sweep = default_sweep_config();
  try {
    detail::parse_run_config(j, sweep.base);
    if (j.contains("sweep")) {
      const auto& js = j.at("sweep");
      if (js.contains("families")) {
        sweep.families.clear();
        for (const auto& name : js.at("families")) {
          sweep.families.push_back(family_from_string(name.get<std::string>()));
        }
      }
      if (js.contains("grids")) {
        for (const auto& [name, grid] : js.at("grids").items()) {
          sweep.grids[family_from_string(name)] = detail::parse_grid(grid);
        }
      }
      sweep.seed = js.value("seed", sweep.seed);
    }
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("malformed config: ") + ex.what());
  }
  sweep.validate();
  return sweep;
}

}  // namespace surfwarp
