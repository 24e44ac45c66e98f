// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. The checks pin the tolerances the library must hold.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "surfwarp/surfwarp.hpp"

using namespace surfwarp;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion,
              name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++g_failures;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Pose random_pose(std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  Vec3 axis(n(rng), n(rng), n(rng));
  while (axis.norm() < 1e-6) axis = Vec3(n(rng), n(rng), n(rng));
  return Pose(exp_rotation(axis.normalized(), ang(rng)),
              Vec3(n(rng), n(rng), n(rng)));
}

struct SweepData {
  SweepOutcome outcome;
  double seconds = 0.0;
  fs::path dir;
};

SweepData run_default_sweep(const std::string& tag) {
  SweepData data;
  data.dir = fs::temp_directory_path() / ("surfwarp_acceptance_" + tag);
  fs::remove_all(data.dir);
  const auto t0 = std::chrono::steady_clock::now();
  SweepConfig sweep = default_sweep_config();
  data.outcome = run_sweep(sweep, data.dir);
  data.seconds = std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  return data;
}

const WarpCaseResult* case_for(const SweepData& data, SurfaceFamily family,
                               std::size_t grid_index) {
  std::size_t case_idx = 0;
  for (const auto& status : data.outcome.statuses) {
    if (!status.ok) continue;
    if (status.family == family && status.grid_index == grid_index) {
      return &data.outcome.cases[case_idx];
    }
    ++case_idx;
  }
  return nullptr;
}

const PairSummary* row_for(const SweepData& data, SurfaceFamily family) {
  for (const auto& row : data.outcome.rows) {
    if (row.surface_family == family) return &row;
  }
  return nullptr;
}

// --------------------------------------------------------------------------

void criterion_1_continuity(const SweepData& sweep) {
  bool pass = !sweep.outcome.any_failed;
  std::ostringstream detail;
  const std::vector<SurfaceFamily> families = {
      SurfaceFamily::Sin, SurfaceFamily::Cos, SurfaceFamily::Parabolic};
  for (SurfaceFamily family : families) {
    for (std::size_t i = 0; i < 4; ++i) {
      const WarpCaseResult* c = case_for(sweep, family, i);
      if (!c) {
        pass = false;
        continue;
      }
      const double bad_t = c->tiled_report.bad_rate;
      const double bad_w = c->warped_report.bad_rate;
      if (!(bad_t >= 0.05)) pass = false;              // curvature premise
      if (!(bad_w <= 0.5 * bad_t)) pass = false;       // halved outlier rate
    }
    const PairSummary* row = row_for(sweep, family);
    if (!row || !(row->median_delta_p95 < 0.0)) pass = false;
    if (row) {
      detail << family_name(family) << " dP95=" << row->median_delta_p95
             << "deg badT=" << row->bad_rate_tiled
             << " badW=" << row->bad_rate_warped << "; ";
    }
  }
  if (!(sweep.seconds <= 60.0)) pass = false;
  detail << "sweep " << sweep.seconds << "s";
  report(1, "continuity improvement on sin/cos/parabolic", pass, detail.str());
}

void criterion_2_neutrality(const SweepData& sweep) {
  const WarpCaseResult* c = case_for(sweep, SurfaceFamily::Cubic, 0);
  bool pass = c != nullptr;
  std::ostringstream detail;
  if (c) {
    const double delta_p95_deg =
        (c->warped_report.p95 - c->tiled_report.p95) * 180.0 / kPi;
    pass = c->tiled_report.bad_rate == 0.0 && c->warped_report.bad_rate == 0.0 &&
           std::abs(delta_p95_deg) <= 1.0;
    detail << "badT=" << c->tiled_report.bad_rate
           << " badW=" << c->warped_report.bad_rate << " |dP95|="
           << std::abs(delta_p95_deg) << "deg";
  }
  report(2, "low-curvature neutrality on near-flat cubic", pass, detail.str());
}

void criterion_3_collisions() {
  RunConfig config;
  config.surface = Surface{SurfaceFamily::Cos, 0.08, 18.0, 1.0, 0.0};
  config.guide = GuideSpec{-0.45, 0.45, 3601};
  config.primitive.waypoint_count = 8;
  config.primitive.period_length = 0.12;
  config.primitive.lift_height = 0.02;
  config.primitive.tool_length = 0.15;
  config.deform.smoothing_window = 9;
  config.metrics.collision_tol = 1e-3;

  const WarpCaseResult r = run_warp_case(config);
  const int tiled_oracle = collision_count(
      r.warp.tiled.poses, config.primitive.tool_length, config.surface,
      config.metrics.collision_tol, 1000);
  const int warped_oracle = collision_count(
      r.warp.warped.poses, config.primitive.tool_length, config.surface,
      config.metrics.collision_tol, 1000);

  const bool pass = tiled_oracle >= 1 && warped_oracle == 0 &&
                    r.collisions_tiled >= 1 && r.collisions_warped == 0;
  std::ostringstream detail;
  detail << "tiled=" << tiled_oracle << " warped=" << warped_oracle
         << " (1000-sample oracle; production " << r.collisions_tiled << "/"
         << r.collisions_warped << ")";
  report(3, "collision elimination on the concave trough", pass, detail.str());
}

void criterion_4_cone_safety() {
  std::mt19937 rng(1001);
  std::uniform_real_distribution<double> force(0.0, 1.0);
  std::uniform_real_distribution<double> theta_dist(0.05, 0.6);
  std::uniform_real_distribution<double> dcone_dist(0.01, 0.5);
  std::uniform_real_distribution<double> dfsr_dist(0.01, 1.0);
  std::uniform_real_distribution<double> kr_dist(0.1, 5.0);

  bool pass = true;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    ExecParams params;
    params.cone_half_angle = theta_dist(rng);
    params.delta_max_cone = dcone_dist(rng);
    params.delta_max_fsr = dfsr_dist(rng);
    params.kappa_r = kr_dist(rng);

    const Pose warp = random_pose(rng);
    const StepResult r = execute_step(warp, force(rng), params);
    const double phi = r.phi;
    const double phi_after = angle_between(r.projected.rotation * params.e_c,
                                           warp.rotation * params.e_c);
    const double bound =
        std::max(params.cone_half_angle, phi - params.delta_max_cone) + 1e-9;
    if (phi_after > bound) pass = false;
    if (phi_after > phi + 1e-12) pass = false;  // the filter never expands
    if (phi <= params.cone_half_angle + params.delta_max_cone &&
        phi_after > params.cone_half_angle + 1e-9) {
      pass = false;
    }
    worst = std::max(worst, phi_after - bound);
  }
  std::ostringstream detail;
  detail << "10000 randomized steps, worst bound slack " << worst;
  report(4, "cone safety bound on randomized steps", pass, detail.str());
}

void criterion_5_deadband_bounds() {
  ExecParams params;
  std::mt19937 rng(1002);
  std::uniform_real_distribution<double> force(0.0, 1.0);
  bool pass = true;
  int deadband_hits = 0;
  for (int i = 0; i < 10000; ++i) {
    const Pose warp = random_pose(rng);
    const double F = force(rng);
    const StepResult r = execute_step(warp, F, params);
    if (std::abs(r.contact_error) <= params.deadband) {
      ++deadband_hits;
      if (!r.candidate.same_bits(warp) || !r.projected.same_bits(warp)) {
        pass = false;
      }
    }
    if ((r.projected.position - warp.position).norm() > params.delta_max + 1e-15) {
      pass = false;
    }
    if (geodesic_angle(r.candidate.rotation, warp.rotation) >
        params.delta_max_fsr + 1e-9) {
      pass = false;
    }
  }
  if (deadband_hits == 0) pass = false;
  std::ostringstream detail;
  detail << "10000 random steps, " << deadband_hits << " deadband hits";
  report(5, "deadband pass-through and disturbance bounds", pass, detail.str());
}

void criterion_6_height_drop() {
  // Flat surface, all-contact primitive, spring preloaded to F* by raising
  // the simulated surface; a 1 cm drop arrives mid-trajectory.
  RunConfig config;
  config.surface = Surface{SurfaceFamily::Sin, 0.0, 1.0, 1.0, 0.0};
  config.guide = GuideSpec{0.0, 2.0, 2001};
  config.primitive.lift_height = 0.0;
  config.exec.delta_max = 0.01;  // spans the drop within one saturated step

  const double h_drop = 0.01;
  const double preload = config.exec.force_target / 100.0;  // F*/k_c

  Scenario scenario;
  scenario.stiffness = 100.0;
  scenario.noise_sigma = 0.0;
  scenario.events = {{ScenarioEvent::Kind::HeightDrop, 0, -preload},
                     {ScenarioEvent::Kind::HeightDrop, 40, h_drop}};

  const ExecuteCaseResult result = run_execute_case(config, scenario);
  const int budget =
      static_cast<int>(std::ceil(h_drop / config.exec.delta_max)) + 5;

  bool pass = !result.log.fault;
  bool pre_drop_tracking = true;
  int recovery_offset = -1;
  for (const auto& rec : result.log.records) {
    if (rec.k > 5 && rec.k < 40 &&
        std::abs(rec.step.contact_error) > config.exec.deadband) {
      pre_drop_tracking = false;
    }
    if (rec.k > 40 && recovery_offset < 0 &&
        std::abs(rec.step.contact_error) <= config.exec.deadband) {
      recovery_offset = rec.k - 40;
    }
  }
  if (!pre_drop_tracking) pass = false;
  if (recovery_offset < 0 || recovery_offset > budget) pass = false;
  if (result.max_deviation > config.exec.cone_half_angle) pass = false;
  std::ostringstream detail;
  detail << "recovered " << recovery_offset << " steps after the drop (budget "
         << budget << "), max deviation " << result.max_deviation * 180.0 / kPi
         << "deg";
  report(6, "height-drop recovery with bounded orientation", pass, detail.str());
}

void criterion_7_deform_invariants(const SweepData& sweep) {
  bool pass = true;
  double min_jacobian = 1.0;
  for (const auto& c : sweep.outcome.cases) {
    // Contact anchoring is bit-exact through the full pipeline.
    for (std::size_t k = 0; k < c.warp.tiled.poses.size(); ++k) {
      if (!c.warp.tiled.contact_flags[k]) continue;
      const Vec3& t = c.warp.tiled.poses[k].position;
      const Vec3& w = c.warp.warped.poses[k].position;
      if (t.x() != w.x() || t.y() != w.y() || t.z() != w.z()) pass = false;
    }
    if (c.max_step_applied > c.step_cap_abs + 1e-15) pass = false;
    if (!(c.jacobian_min > 0.0)) pass = false;
    min_jacobian = std::min(min_jacobian, c.jacobian_min);
  }
  std::ostringstream detail;
  detail << sweep.outcome.cases.size() << " sweep runs, min probe Jacobian "
         << min_jacobian;
  report(7, "anchoring, step caps and positive Jacobians", pass, detail.str());
}

void criterion_8_minimality() {
  std::mt19937 rng(1003);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  bool pass = true;
  for (int trial = 0; trial < 100; ++trial) {
    const Pose tiled = random_pose(rng);
    Vec3 target(n(rng), n(rng), n(rng));
    while (target.norm() < 1e-3) target = Vec3(n(rng), n(rng), n(rng));
    target.normalize();
    const Rotation completion =
        rotation_between(tiled.rotation * kToolAxis, target) * tiled.rotation;
    const double best = geodesic_angle(completion, tiled.rotation);
    for (int i = 0; i < 100; ++i) {
      const Rotation twisted = exp_rotation(target, ang(rng)) * completion;
      if (geodesic_angle(twisted, tiled.rotation) < best - 1e-9) pass = false;
    }
  }
  report(8, "minimum-change completion beats random twists", pass,
         "100 poses x 100 twists");
}

void criterion_9_oracles() {
  std::mt19937 rng(1004);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  bool pass = true;

  auto random_unit = [&]() {
    Vec3 v(n(rng), n(rng), n(rng));
    while (v.norm() < 1e-6) v = Vec3(n(rng), n(rng), n(rng));
    return Vec3(v.normalized());
  };

  // geodesic_angle vs the rotation-matrix trace formula.
  for (int i = 0; i < 1000; ++i) {
    const Rotation a = exp_rotation(random_unit(), ang(rng));
    const Rotation b = exp_rotation(random_unit(), ang(rng));
    const Eigen::Matrix3d rel = a.matrix().transpose() * b.matrix();
    const double oracle =
        std::acos(std::clamp((rel.trace() - 1.0) / 2.0, -1.0, 1.0));
    if (std::abs(geodesic_angle(a, b) - oracle) > 1e-6) pass = false;
  }

  // exp_rotation vs the Rodrigues matrix on the basis vectors.
  for (int i = 0; i < 1000; ++i) {
    const Vec3 axis = random_unit();
    const double angle = ang(rng);
    Eigen::Matrix3d K;
    K << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
    const Eigen::Matrix3d R = Eigen::Matrix3d::Identity() + std::sin(angle) * K +
                              (1.0 - std::cos(angle)) * K * K;
    const Rotation r = exp_rotation(axis, angle);
    for (int c = 0; c < 3; ++c) {
      if ((r * Vec3(Vec3::Unit(c)) - R * Vec3::Unit(c)).norm() > 1e-6) {
        pass = false;
      }
    }
  }

  // surface_normal vs central finite differences.
  std::uniform_real_distribution<double> xs(-1.5, 1.5);
  const std::vector<Surface> surfaces = {
      {SurfaceFamily::Sin, 0.8, 2.0, 1.0, 0.0},
      {SurfaceFamily::Cos, 0.5, 3.0, 1.0, 0.0},
      {SurfaceFamily::Exp, 0.7, 1.0, 4.0, 0.0},
      {SurfaceFamily::Parabolic, 0.9, 1.0, 1.0, 0.0},
      {SurfaceFamily::Cubic, 0.4, 1.0, 1.0, 0.0}};
  const double h = 1e-6;
  for (const Surface& s : surfaces) {
    for (int i = 0; i < 1000; ++i) {
      const double x = xs(rng);
      const double fd = (s.height(x + h) - s.height(x - h)) / (2.0 * h);
      const Vec3 oracle = Vec3(-fd, 0.0, 1.0).normalized();
      if ((s.normal(x) - oracle).norm() > 1e-6) pass = false;
    }
  }
  report(9, "geodesic/exp/normal oracle equivalence", pass,
         ">= 1000 cases each at 1e-6");
}

void criterion_10_determinism(const SweepData& first) {
  const SweepData second = run_default_sweep("determinism");
  const std::string a = slurp(first.dir / "summary_table.csv");
  const std::string b = slurp(second.dir / "summary_table.csv");
  const bool pass = !a.empty() && a == b;
  report(10, "byte-identical sweep summaries", pass,
         std::to_string(a.size()) + " bytes compared");
}

}  // namespace

int main() {
  const SweepData sweep = run_default_sweep("main");

  criterion_1_continuity(sweep);
  criterion_2_neutrality(sweep);
  criterion_3_collisions();
  criterion_4_cone_safety();
  criterion_5_deadband_bounds();
  criterion_6_height_drop();
  criterion_7_deform_invariants(sweep);
  criterion_8_minimality();
  criterion_9_oracles();
  criterion_10_determinism(sweep);

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
