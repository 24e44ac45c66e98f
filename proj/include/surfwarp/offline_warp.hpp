#pragma once

// Offline warping pipeline: arc-length tiling of a periodic primitive along a
// guide curve, dual-track tool-axis parameterization, bounded normal-driven
// track deformation, axis smoothing, and minimum-change pose completion.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "surfwarp/geometry.hpp"
#include "surfwarp/primitive.hpp"
#include "surfwarp/surface.hpp"

namespace surfwarp {

/// Tool-axis basis vector in the tool frame: points from base toward tip.
/// World frame is gravity-down, so an upright tool has axis -z.
inline const Vec3 kToolAxis{0.0, 0.0, -1.0};

struct TiledTrajectory {
  std::vector<Pose> poses;
  std::vector<bool> contact_flags;  // contact-critical samples
  std::vector<int> tile_id;         // non-decreasing period index per sample

  std::vector<std::size_t> contact_set() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < contact_flags.size(); ++k) {
      if (contact_flags[k]) out.push_back(k);
    }
    return out;
  }
  std::vector<std::size_t> free_set() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < contact_flags.size(); ++k) {
      if (!contact_flags[k]) out.push_back(k);
    }
    return out;
  }

  void validate() const {
    if (poses.size() != contact_flags.size() || poses.size() != tile_id.size()) {
      throw std::invalid_argument("TiledTrajectory: length mismatch");
    }
    for (std::size_t k = 1; k < tile_id.size(); ++k) {
      if (tile_id[k] < tile_id[k - 1]) {
        throw std::invalid_argument("TiledTrajectory: tile_id decreases");
      }
    }
  }
};

/// Paired tip/base waypoint tracks; base - tip defines the tool axis.
struct DualTracks {
  std::vector<Vec3> tip;
  std::vector<Vec3> base;

  void validate() const {
    if (tip.size() != base.size()) {
      throw std::invalid_argument("DualTracks: length mismatch");
    }
    if (tip.size() < 2) {
      throw std::invalid_argument("DualTracks: need at least 2 samples");
    }
  }
};

struct DeformParams {
  int iterations = 50;            // m_max
  double step_cap = 0.5;          // eta, fraction of min in-tile tip spacing
  double lambda_tip = 1.0;
  double lambda_base = 0.4;
  double target_clearance = 0.005;  // c*, meters
  int smoothing_window = 5;         // w, odd sample count
  double axis_eps = 1e-4;           // meters; baseline below this is stale

  void validate() const {
    if (iterations < 1) throw std::invalid_argument("DeformParams: iterations < 1");
    if (!(step_cap > 0.0) || step_cap > 0.5) {
      throw std::invalid_argument("DeformParams: step_cap outside (0, 0.5]");
    }
    if (lambda_base < 0.0 || lambda_tip > 1.0 || lambda_base > lambda_tip) {
      throw std::invalid_argument("DeformParams: need 0 <= lambda_base <= lambda_tip <= 1");
    }
    if (smoothing_window < 1 || smoothing_window % 2 == 0) {
      throw std::invalid_argument("DeformParams: smoothing_window must be odd and >= 1");
    }
    if (!(target_clearance >= 0.0)) {
      throw std::invalid_argument("DeformParams: negative target_clearance");
    }
    if (!(axis_eps > 0.0)) throw std::invalid_argument("DeformParams: axis_eps <= 0");
  }
};

struct WarpedTrajectory {
  std::vector<Pose> poses;        // position == tip, orientation axis == tip-base
  std::vector<Vec3> tip;
  std::vector<Vec3> base;
  std::vector<bool> contact_flags;
  int stale_axis_count = 0;       // samples that reused the previous axis

  std::vector<std::size_t> contact_set() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < contact_flags.size(); ++k) {
      if (contact_flags[k]) out.push_back(k);
    }
    return out;
  }
  std::vector<std::size_t> free_set() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < contact_flags.size(); ++k) {
      if (!contact_flags[k]) out.push_back(k);
    }
    return out;
  }
};

/// Per-iteration record of the deformation as applied: the tip anchor
/// positions before the update and the capped field at every sample
/// (zero at contact samples). Used to evaluate the composed spatial map.
struct DeformTrace {
  std::vector<std::vector<Vec3>> anchors;  // per iteration, size K
  std::vector<std::vector<Vec3>> field;    // per iteration, size K
  double step_cap_abs = 0.0;               // eta * min in-tile spacing
  double max_step_applied = 0.0;           // max ||lambda_tip * v_k|| seen
  int iterations_run = 0;
};

// ---------------------------------------------------------------------------
// Step 1: tiling

/// Tile one period per floor(total_arclength / period_length) of guide, with
/// centers at (i + 0.5) * period_length of arc. Contact waypoints are placed
/// by arc length along the guide (nearest-sample snap within tol, linear
/// interpolation otherwise) so they land on the surface; free waypoints map
/// as center + x_local * chord + z_local * world_z. Each tile's orientation
/// is the minimal rotation taking +x to its chord (the final tile reuses the
/// previous chord). Contact flags and tile ids carry over per sample.
inline TiledTrajectory tile_along_guide(const PeriodicPrimitive& primitive,
                                        const GuideCurve& guide, double tol) {
  primitive.validate();
  const double period = primitive.period_length;
  const double total = guide.total_arclength();
  const int n_tiles = static_cast<int>(std::floor(total / period + 1e-9));
  if (n_tiles < 1) {
    throw std::domain_error("tile_along_guide: guide shorter than one period");
  }

  std::vector<Vec3> centers;
  centers.reserve(static_cast<std::size_t>(n_tiles));
  for (int i = 0; i < n_tiles; ++i) {
    const double s = (static_cast<double>(i) + 0.5) * period;
    centers.push_back(guide.point_at_arclength(s, tol));
  }

  std::vector<Vec3> chords(centers.size());
  if (centers.size() == 1) {
    chords[0] = (guide.samples.back() - guide.samples.front()).normalized();
  } else {
    for (std::size_t i = 0; i + 1 < centers.size(); ++i) {
      chords[i] = (centers[i + 1] - centers[i]).normalized();
    }
    chords.back() = chords[centers.size() - 2];
  }

  TiledTrajectory out;
  const std::size_t per_tile = primitive.waypoints.size();
  out.poses.reserve(centers.size() * per_tile);
  out.contact_flags.reserve(centers.size() * per_tile);
  out.tile_id.reserve(centers.size() * per_tile);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const Rotation frame = rotation_between(Vec3::UnitX(), chords[i]);
    const double s_center = (static_cast<double>(i) + 0.5) * period;
    for (const auto& wp : primitive.waypoints) {
      Vec3 pos;
      if (wp.contact) {
        pos = guide.point_at_arclength(s_center + wp.tip_offset.x(), tol) +
              wp.tip_offset.z() * Vec3::UnitZ();
      } else {
        pos = centers[i] + wp.tip_offset.x() * chords[i] +
              wp.tip_offset.z() * Vec3::UnitZ();
      }
      out.poses.emplace_back(frame, pos);
      out.contact_flags.push_back(wp.contact);
      out.tile_id.push_back(static_cast<int>(i));
    }
  }
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------
// Step 2: dual tracks

/// Tip track = tiled pose positions; base track sits tool_length above the
/// tip along the pose's tool axis (base = tip - L * R * kToolAxis).
inline DualTracks dual_tracks(const TiledTrajectory& tiled, double tool_length) {
  if (!(tool_length > 0.0)) {
    throw std::invalid_argument("dual_tracks: tool_length <= 0");
  }
  DualTracks tracks;
  tracks.tip.reserve(tiled.poses.size());
  tracks.base.reserve(tiled.poses.size());
  for (const Pose& pose : tiled.poses) {
    tracks.tip.push_back(pose.position);
    tracks.base.push_back(pose.position - tool_length * (pose.rotation * kToolAxis));
  }
  tracks.validate();
  return tracks;
}

// ---------------------------------------------------------------------------
// Step 3: deformation

namespace detail {

inline double min_in_tile_spacing(const std::vector<Vec3>& tip,
                                  const std::vector<int>& tile_id) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < tip.size(); ++k) {
    if (tile_id[k] != tile_id[k + 1]) continue;  // period seams may coincide
    const double d = (tip[k + 1] - tip[k]).norm();
    if (d < 1e-9) continue;  // clamped duplicates carry no spacing information
    m = std::min(m, d);
  }
  if (!std::isfinite(m)) {
    throw std::domain_error("deform: degenerate tip spacing");
  }
  return m;
}

}  // namespace detail

/// Iterative normal-driven lift of free-space samples toward the target
/// clearance. Per iteration: the clearance deficit at each free tip is
/// measured, deficits are moving-average smoothed over windows that stay
/// inside one tile, the smoothed magnitude is capped at
/// step_cap * (min in-tile tip spacing), and the resulting field (along the
/// local surface normal) moves tip and base samples at free indices with
/// strengths lambda_tip / lambda_base. Contact samples are returned
/// bit-identical. Stops early when the field maximum drops below 1e-7 m.
inline DualTracks deform(const DualTracks& tracks, const Surface& surface,
                         const std::vector<bool>& contact_flags,
                         const std::vector<int>& tile_id,
                         const DeformParams& params,
                         DeformTrace* trace = nullptr) {
  tracks.validate();
  params.validate();
  const std::size_t K = tracks.tip.size();
  if (contact_flags.size() != K || tile_id.size() != K) {
    throw std::invalid_argument("deform: flag/tile length mismatch");
  }

  DualTracks out = tracks;
  const double cap = params.step_cap * detail::min_in_tile_spacing(tracks.tip, tile_id);
  const int half = params.smoothing_window / 2;

  if (trace) {
    *trace = DeformTrace{};
    trace->step_cap_abs = cap;
  }

  std::vector<double> deficit(K), smoothed(K);
  for (int m = 0; m < params.iterations; ++m) {
    for (std::size_t k = 0; k < K; ++k) {
      if (contact_flags[k]) {
        deficit[k] = 0.0;
        continue;
      }
      const double clearance = out.tip[k].z() - surface.height(out.tip[k].x());
      deficit[k] = std::max(0.0, params.target_clearance - clearance);
    }

    // Moving average within the sample's own tile.
    for (std::size_t k = 0; k < K; ++k) {
      double acc = 0.0;
      int count = 0;
      const int lo = static_cast<int>(k) - half;
      const int hi = static_cast<int>(k) + half;
      for (int j = lo; j <= hi; ++j) {
        if (j < 0 || j >= static_cast<int>(K)) continue;
        if (tile_id[static_cast<std::size_t>(j)] != tile_id[k]) continue;
        acc += deficit[static_cast<std::size_t>(j)];
        ++count;
      }
      smoothed[k] = count > 0 ? acc / count : 0.0;
    }

    double max_field = 0.0;
    std::vector<Vec3> field(K, Vec3::Zero());
    for (std::size_t k = 0; k < K; ++k) {
      const double mag = std::min(smoothed[k], cap);
      if (mag > 0.0) {
        field[k] = mag * surface.normal(out.tip[k].x());
        max_field = std::max(max_field, mag);
      }
    }

    if (trace) {
      trace->anchors.push_back(out.tip);
      trace->field.push_back(field);
      trace->max_step_applied =
          std::max(trace->max_step_applied, params.lambda_tip * max_field);
      trace->iterations_run = m + 1;
    }
    if (max_field < 1e-7) break;

    for (std::size_t k = 0; k < K; ++k) {
      if (contact_flags[k]) continue;
      out.tip[k] += params.lambda_tip * field[k];
      out.base[k] += params.lambda_base * field[k];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Axis smoothing

/// Centered moving average of the tool-axis direction sequence (windows span
/// period seams), with the base track re-derived at distance tool_length so
/// the tracks stay consistent with the smoothed axes. Tips are untouched.
/// Constant axis sequences pass through unchanged.
inline DualTracks smooth_axes(const DualTracks& tracks, double tool_length,
                              int window, double axis_eps) {
  tracks.validate();
  if (window < 1 || window % 2 == 0) {
    throw std::invalid_argument("smooth_axes: window must be odd and >= 1");
  }
  const std::size_t K = tracks.tip.size();

  std::vector<Vec3> axis(K);
  Vec3 last = -Vec3::UnitZ();
  for (std::size_t k = 0; k < K; ++k) {
    const Vec3 d = tracks.tip[k] - tracks.base[k];
    if (d.norm() > axis_eps) {
      axis[k] = d.normalized();
      last = axis[k];
    } else {
      axis[k] = last;  // stale-axis reuse
    }
  }

  DualTracks out;
  out.tip = tracks.tip;
  out.base.resize(K);
  const int half = window / 2;
  bool all_same = true;
  for (std::size_t k = 1; k < K && all_same; ++k) {
    all_same = (axis[k] - axis[0]).norm() < 1e-15;
  }
  for (std::size_t k = 0; k < K; ++k) {
    Vec3 u = axis[k];
    if (!all_same && window > 1) {
      Vec3 acc = Vec3::Zero();
      for (int j = static_cast<int>(k) - half; j <= static_cast<int>(k) + half; ++j) {
        if (j < 0 || j >= static_cast<int>(K)) continue;
        acc += axis[static_cast<std::size_t>(j)];
      }
      if (acc.norm() > 1e-9) {
        u = acc.normalized();
      }
    }
    out.base[k] = out.tip[k] - tool_length * u;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Step 4: completion

/// Position sequence = tip track. Orientation: the tool axis comes from the
/// track baseline (previous valid axis reused below axis_eps, the tiled axis
/// at k = 0), and the remaining twist is resolved by the minimum-change rule:
/// R_warp = rotation_between(R_tile * e_c, axis) * R_tile.
inline WarpedTrajectory complete_poses(const DualTracks& warped,
                                       const TiledTrajectory& tiled,
                                       double axis_eps) {
  warped.validate();
  tiled.validate();
  const std::size_t K = warped.tip.size();
  if (tiled.poses.size() != K) {
    throw std::invalid_argument("complete_poses: length mismatch");
  }

  WarpedTrajectory out;
  out.tip = warped.tip;
  out.base = warped.base;
  out.contact_flags = tiled.contact_flags;
  out.poses.reserve(K);

  Vec3 last_axis = tiled.poses.front().rotation * kToolAxis;
  for (std::size_t k = 0; k < K; ++k) {
    const Vec3 d = warped.tip[k] - warped.base[k];
    Vec3 u;
    if (d.norm() > axis_eps) {
      u = d.normalized();
      last_axis = u;
    } else {
      u = last_axis;
      ++out.stale_axis_count;
    }
    const Rotation& r_tile = tiled.poses[k].rotation;
    const Vec3 tile_axis = r_tile * kToolAxis;
    const Rotation r_warp = rotation_between(tile_axis, u) * r_tile;
    out.poses.emplace_back(r_warp, warped.tip[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Full operator

struct WarpResult {
  TiledTrajectory tiled;
  WarpedTrajectory warped;
};

/// Tiling, dual tracks, deformation, axis smoothing and completion in one
/// call. Deterministic for fixed inputs.
inline WarpResult warp(const PrimitiveConfig& nominal, const GuideCurve& guide,
                       const Surface& surface, const DeformParams& params,
                       double tol, DeformTrace* trace = nullptr) {
  const PeriodicPrimitive primitive = extract_primitive(nominal);
  WarpResult result;
  result.tiled = tile_along_guide(primitive, guide, tol);
  DualTracks tracks = dual_tracks(result.tiled, primitive.tool_length);
  tracks = deform(tracks, surface, result.tiled.contact_flags,
                  result.tiled.tile_id, params, trace);
  tracks = smooth_axes(tracks, primitive.tool_length, params.smoothing_window,
                       params.axis_eps);
  result.warped = complete_poses(tracks, result.tiled, params.axis_eps);
  return result;
}

// ---------------------------------------------------------------------------
// Composed-map probes

/// Spatial extension of a recorded deformation: every iteration's sample
/// displacements are interpolated with a Gaussian kernel anchored at that
/// iteration's tip positions, and applied with the tip strength. Evaluating
/// the composition at off-track points gives the map the invertibility
/// probes differentiate.
inline Vec3 apply_composed_map(const DeformTrace& trace, double lambda,
                               const Vec3& p_in, double sigma) {
  Vec3 p = p_in;
  const double r_cut2 = 16.0 * sigma * sigma;
  const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
  for (int m = 0; m < trace.iterations_run; ++m) {
    const auto& anchors = trace.anchors[static_cast<std::size_t>(m)];
    const auto& field = trace.field[static_cast<std::size_t>(m)];
    Vec3 num = Vec3::Zero();
    double den = 0.0;
    for (std::size_t k = 0; k < anchors.size(); ++k) {
      const double r2 = (p - anchors[k]).squaredNorm();
      if (r2 > r_cut2) continue;
      const double w = std::exp(-r2 * inv_two_sigma2);
      num += w * field[k];
      den += w;
    }
    if (den > 1e-12) {
      p += lambda * (num / den);
    }
  }
  return p;
}

/// Minimum central-difference Jacobian determinant of the composed map over
/// a probe grid around the initial tip track. Returns 1.0 when no deformation
/// was applied.
inline double min_probe_jacobian(const DeformTrace& trace, double lambda,
                                 double min_spacing, int window) {
  if (trace.iterations_run == 0 || trace.anchors.empty()) return 1.0;
  const double sigma = std::max(min_spacing, 0.5 * window * min_spacing);
  const double h = min_spacing / 10.0;
  const auto& tips = trace.anchors.front();

  double min_det = std::numeric_limits<double>::infinity();
  const double off = 0.5 * min_spacing;
  for (std::size_t k = 0; k < tips.size(); k += 2) {
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dz = -1; dz <= 1; ++dz) {
        const Vec3 probe = tips[k] + Vec3(dx * off, 0.0, dz * off);
        Eigen::Matrix3d J;
        for (int axis = 0; axis < 3; ++axis) {
          Vec3 e = Vec3::Zero();
          e[axis] = h;
          const Vec3 hi = apply_composed_map(trace, lambda, probe + e, sigma);
          const Vec3 lo = apply_composed_map(trace, lambda, probe - e, sigma);
          J.col(axis) = (hi - lo) / (2.0 * h);
        }
        min_det = std::min(min_det, J.determinant());
      }
    }
  }
  return min_det;
}

}  // namespace surfwarp
