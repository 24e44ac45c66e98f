#pragma once

// Continuity and feasibility metrics: per-step angular change, nearest-rank
// p95, bad-step rate, tool-segment collision counting, and the paired
// tiled-vs-warped family summary.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "surfwarp/geometry.hpp"
#include "surfwarp/offline_warp.hpp"
#include "surfwarp/surface.hpp"

namespace surfwarp {

constexpr double kDefaultBadStepThreshold = 10.0 * kPi / 180.0;
constexpr int kCollisionSamplesProduction = 32;

struct ContinuityReport {
  std::vector<double> d_theta;  // radians, length K - 1
  double p95 = 0.0;             // radians
  double bad_rate = 0.0;
  std::size_t n_steps = 0;
};

/// Geodesic angle between consecutive rotations.
inline std::vector<double> angular_steps(const std::vector<Pose>& poses) {
  if (poses.size() < 2) {
    throw std::domain_error("angular_steps: need at least 2 poses");
  }
  std::vector<double> out;
  out.reserve(poses.size() - 1);
  for (std::size_t k = 0; k + 1 < poses.size(); ++k) {
    out.push_back(geodesic_angle(poses[k].rotation, poses[k + 1].rotation));
  }
  return out;
}

/// Nearest-rank 95th percentile: sort ascending, take index ceil(0.95n) - 1.
inline double percentile_95(const std::vector<double>& values) {
  if (values.empty()) {
    throw std::domain_error("percentile_95: empty input");
  }
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t rank = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(sorted.size())));
  return sorted[rank - 1];
}

/// Fraction of values strictly above the threshold.
inline double bad_step_rate(const std::vector<double>& values,
                            double threshold = kDefaultBadStepThreshold) {
  if (values.empty()) {
    throw std::domain_error("bad_step_rate: empty input");
  }
  std::size_t count = 0;
  for (double v : values) {
    if (v > threshold) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(values.size());
}

inline ContinuityReport continuity_report(
    const std::vector<Pose>& poses,
    double threshold = kDefaultBadStepThreshold) {
  ContinuityReport report;
  report.d_theta = angular_steps(poses);
  report.n_steps = report.d_theta.size();
  report.p95 = percentile_95(report.d_theta);
  report.bad_rate = bad_step_rate(report.d_theta, threshold);
  return report;
}

/// Number of poses whose tool segment dips below the surface by more than
/// clearance_tol. The segment runs from the tip (the pose position, exempt)
/// to the base at tool_length along the pose's tool axis, sampled at uniform
/// parameters.
inline int collision_count(const std::vector<Pose>& poses, double tool_length,
                           const Surface& surface, double clearance_tol,
                           int samples_per_axis = kCollisionSamplesProduction) {
  if (samples_per_axis < 2) {
    throw std::invalid_argument("collision_count: samples_per_axis < 2");
  }
  int collisions = 0;
  for (const Pose& pose : poses) {
    const Vec3 tip = pose.position;
    const Vec3 base = tip - tool_length * (pose.rotation * kToolAxis);
    bool hit = false;
    for (int j = 1; j < samples_per_axis && !hit; ++j) {
      const double t = static_cast<double>(j) / (samples_per_axis - 1);
      const Vec3 p = tip + t * (base - tip);
      hit = surface.height(p.x()) - p.z() > clearance_tol;
    }
    if (hit) ++collisions;
  }
  return collisions;
}

struct PairMetrics {
  ContinuityReport tiled;
  ContinuityReport warped;
  int collisions_tiled = 0;
  int collisions_warped = 0;
};

struct PairSummary {
  SurfaceFamily surface_family = SurfaceFamily::Sin;
  std::size_t n_pairs = 0;
  std::size_t n_steps = 0;             // pose transitions over the tiled set
  double median_delta_p95 = 0.0;       // degrees, warped minus tiled
  double bad_rate_tiled = 0.0;         // step-weighted pool
  double bad_rate_warped = 0.0;
  double delta_bad = 0.0;              // tiled minus warped
  int collisions_tiled = 0;
  int collisions_warped = 0;
};

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

/// Family aggregate in the summary-table layout: median per-pair p95 delta
/// in degrees, step-weighted pooled bad rates, summed collision counts.
inline PairSummary summarize_pairs(const std::vector<PairMetrics>& pairs,
                                   SurfaceFamily family) {
  if (pairs.empty()) {
    throw std::domain_error("summarize_pairs: no pairs");
  }
  PairSummary s;
  s.surface_family = family;
  s.n_pairs = pairs.size();

  std::vector<double> deltas;
  deltas.reserve(pairs.size());
  double bad_tiled = 0.0;
  double bad_warped = 0.0;
  for (const auto& pair : pairs) {
    s.n_steps += pair.tiled.n_steps;
    deltas.push_back((pair.warped.p95 - pair.tiled.p95) * 180.0 / kPi);
    bad_tiled += pair.tiled.bad_rate * static_cast<double>(pair.tiled.n_steps);
    bad_warped += pair.warped.bad_rate * static_cast<double>(pair.warped.n_steps);
    s.collisions_tiled += pair.collisions_tiled;
    s.collisions_warped += pair.collisions_warped;
  }
  s.median_delta_p95 = detail::median(std::move(deltas));
  s.bad_rate_tiled = bad_tiled / static_cast<double>(s.n_steps);
  s.bad_rate_warped = bad_warped / static_cast<double>(s.n_steps);
  s.delta_bad = s.bad_rate_tiled - s.bad_rate_warped;
  return s;
}

}  // namespace surfwarp
