#pragma once

// Online projection: force-error-driven bounded pose candidates followed by
// an always-on conic orientation filter centered on the reference axis.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "surfwarp/contact_sim.hpp"
#include "surfwarp/geometry.hpp"
#include "surfwarp/offline_warp.hpp"

namespace surfwarp {

struct ExecParams {
  double force_target = 0.5;       // F*, normalized reading in [0, 1]
  double deadband = 0.05;          // eps_F
  double kappa_p = 0.05;           // meters per unit force error
  double delta_max = 0.005;        // translation bound, meters
  double kappa_r = 0.2;            // radians per unit force error
  double delta_max_fsr = 0.15;     // candidate rotation bound, radians
  double cone_half_angle = 0.2;    // theta, radians
  double delta_max_cone = 0.1;     // pushback bound, radians
  Vec3 g_hat{0.0, 0.0, 1.0};       // vertical correction direction (up)
  Vec3 e_c = kToolAxis;            // tool-axis basis in the tool frame
  double axis_regularizer = 1e-9;  // eps in the correction-axis denominators

  void validate() const {
    if (!(deadband >= 0.0)) throw std::invalid_argument("ExecParams: deadband < 0");
    if (!(kappa_p > 0.0) || !(delta_max > 0.0) || !(kappa_r > 0.0) ||
        !(delta_max_fsr > 0.0) || !(delta_max_cone > 0.0)) {
      throw std::invalid_argument("ExecParams: gains and bounds must be positive");
    }
    if (!(cone_half_angle > 0.0) || cone_half_angle >= 0.5 * kPi) {
      throw std::invalid_argument("ExecParams: cone_half_angle outside (0, pi/2)");
    }
    if (std::abs(g_hat.norm() - 1.0) > 1e-9 || std::abs(e_c.norm() - 1.0) > 1e-9) {
      throw std::invalid_argument("ExecParams: g_hat and e_c must be unit");
    }
    if (!(axis_regularizer > 0.0)) {
      throw std::invalid_argument("ExecParams: axis_regularizer <= 0");
    }
  }
};

struct StepResult {
  Pose candidate;           // after the force-driven disturbance
  Pose projected;           // after the conic filter
  double contact_error = 0.0;
  double phi = 0.0;         // pre-filter axis deviation, radians
  double delta_cone = 0.0;  // applied pushback, radians
};

/// e = F - F*. F must be a normalized reading in [0, 1].
inline double contact_error(double F, const ExecParams& params) {
  if (!(F >= 0.0) || !(F <= 1.0)) {
    throw std::domain_error("contact_error: reading outside [0, 1]");
  }
  return F - params.force_target;
}

/// Clamp to [-bound, bound].
inline double saturate(double xi, double bound) {
  if (!(bound > 0.0)) throw std::invalid_argument("saturate: bound <= 0");
  return std::min(bound, std::max(-bound, xi));
}

/// Force-driven candidate around the reference pose. Inside the deadband the
/// reference is returned bit-exactly. Otherwise the position shifts by
/// saturate(kappa_p * e) along g_hat and the orientation rotates by
/// -saturate(kappa_r * e) about the regularized axis u_warp x g_hat; the
/// rotational part is skipped when the tool axis is parallel to g_hat.
inline Pose fsr_candidate(const Pose& warp, double F, const ExecParams& params) {
  const double e = contact_error(F, params);
  if (std::abs(e) <= params.deadband) {
    return warp;
  }
  const double delta_p = saturate(params.kappa_p * e, params.delta_max);
  const Vec3 position = warp.position + delta_p * params.g_hat;

  const Vec3 u_warp = warp.rotation * params.e_c;
  const Vec3 cross = u_warp.cross(params.g_hat);
  const double cross_norm = cross.norm();
  if (cross_norm < 1e-9) {
    return Pose(warp.rotation, position);
  }
  const Vec3 axis = cross / (cross_norm + params.axis_regularizer);
  const double delta_r = saturate(params.kappa_r * e, params.delta_max_fsr);
  const Rotation rot = exp_rotation(axis, -delta_r) * warp.rotation;
  return Pose(rot, position);
}

/// Bounded pushback toward the reference axis whenever the candidate axis
/// leaves the cone of half-angle theta: delta = min(delta_max_cone,
/// max(0, phi - theta)) about the regularized axis u_cand x u_warp. Only the
/// orientation changes; inside the cone the pose passes through bit-exactly.
inline std::pair<Pose, double> conic_filter(const Pose& candidate,
                                            const Pose& warp,
                                            const ExecParams& params) {
  const Vec3 u_cand = candidate.rotation * params.e_c;
  const Vec3 u_warp = warp.rotation * params.e_c;
  const double phi = angle_between(u_cand, u_warp);
  const double delta = std::min(params.delta_max_cone,
                                std::max(0.0, phi - params.cone_half_angle));
  if (delta <= 0.0) {
    return {candidate, 0.0};
  }
  const Vec3 cross = u_cand.cross(u_warp);
  const Vec3 axis = cross / (cross.norm() + params.axis_regularizer);
  const Rotation rot = exp_rotation(axis, delta) * candidate.rotation;
  return {Pose(rot, candidate.position), delta};
}

/// Candidate generation followed by the conic filter, with the intermediate
/// quantities recorded.
inline StepResult execute_step(const Pose& warp, double F, const ExecParams& params) {
  StepResult result;
  result.contact_error = contact_error(F, params);
  result.candidate = fsr_candidate(warp, F, params);
  result.phi = angle_between(result.candidate.rotation * params.e_c,
                             warp.rotation * params.e_c);
  auto [projected, delta] = conic_filter(result.candidate, warp, params);
  result.projected = projected;
  result.delta_cone = delta;
  return result;
}

struct ExecutionRecord {
  int k = 0;
  double F = 0.0;
  StepResult step;
  int event_flag = 0;  // bit 1: height drop, bit 2: force bias
};

struct ExecutionLog {
  std::vector<ExecutionRecord> records;
  bool fault = false;
  std::string fault_message;
};

/// Closed-loop pass over a reference trajectory: the reading at step k is
/// taken at the previously commanded pose (the reference pose at k = 0), the
/// projected pose becomes the next command, and the environment advances one
/// step afterwards. An environment fault aborts with the partial log.
inline ExecutionLog execute_trajectory(const WarpedTrajectory& warped,
                                       ContactEnv& env, const ExecParams& params) {
  params.validate();
  ExecutionLog log;
  log.records.reserve(warped.poses.size());
  Vec3 probe_tip = warped.poses.empty() ? Vec3::Zero() : warped.poses.front().position;
  for (std::size_t k = 0; k < warped.poses.size(); ++k) {
    ExecutionRecord rec;
    rec.k = static_cast<int>(k);
    try {
      rec.F = env.measure(probe_tip);
      rec.step = execute_step(warped.poses[k], rec.F, params);
      probe_tip = rec.step.projected.position;
      rec.event_flag = env.advance();
    } catch (const std::exception& ex) {
      log.fault = true;
      log.fault_message = ex.what();
      return log;
    }
    log.records.push_back(rec);
  }
  return log;
}

}  // namespace surfwarp
