#pragma once

// Simulated contact loop: a clamped linear-spring force reading over the
// analytic surface, with scripted height-drop and force-bias events.

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "surfwarp/geometry.hpp"
#include "surfwarp/surface.hpp"

namespace surfwarp {

struct ScenarioEvent {
  enum class Kind { HeightDrop, ForceBias };
  Kind kind = Kind::HeightDrop;
  int at_step = 0;
  double magnitude = 0.0;  // meters for drops, dimensionless for bias
};

struct Scenario {
  double stiffness = 100.0;   // force units per meter of penetration
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  std::vector<ScenarioEvent> events;

  void validate(std::size_t trajectory_length) const {
    if (!(stiffness > 0.0)) throw std::invalid_argument("Scenario: stiffness <= 0");
    if (noise_sigma < 0.0) throw std::invalid_argument("Scenario: noise_sigma < 0");
    for (const auto& ev : events) {
      if (ev.at_step < 0 ||
          static_cast<std::size_t>(ev.at_step) > trajectory_length) {
        throw std::invalid_argument("Scenario: event outside trajectory length");
      }
      if (!std::isfinite(ev.magnitude)) {
        throw std::invalid_argument("Scenario: non-finite event magnitude");
      }
    }
  }
};

/// Single-owner environment state machine. Readings are deterministic for a
/// fixed seed and step count; the measurement is clamped to [0, 1].
class ContactEnv {
 public:
  ContactEnv(const Surface& surface, const Scenario& scenario)
      : surface_(surface), scenario_(scenario), rng_(scenario.seed) {
    if (!(scenario.stiffness > 0.0)) {
      throw std::invalid_argument("ContactEnv: stiffness <= 0");
    }
    if (scenario.noise_sigma < 0.0) {
      throw std::invalid_argument("ContactEnv: noise_sigma < 0");
    }
    apply_events_for(0);  // events scheduled for step 0 shape the initial state
  }

  /// Spring reading at the tool tip: clamp(k_c * penetration + bias + noise).
  double measure(const Vec3& tool_tip) {
    const double h = surface_.height(tool_tip.x());
    if (!std::isfinite(h) || !finite(tool_tip)) {
      throw std::runtime_error("ContactEnv: non-finite measurement state");
    }
    const double penetration = std::max(0.0, h - tool_tip.z());
    double F = scenario_.stiffness * penetration + bias_;
    if (scenario_.noise_sigma > 0.0) {
      std::normal_distribution<double> noise(0.0, scenario_.noise_sigma);
      F += noise(rng_);
    }
    return std::clamp(F, 0.0, 1.0);
  }

  /// Advance one step and apply any events scheduled for the new step.
  /// Returns a flag bitmask: 1 = height drop, 2 = force bias.
  int advance() {
    ++current_step_;
    return apply_events_for(current_step_);
  }

  int current_step() const { return current_step_; }
  const Surface& surface() const { return surface_; }
  double bias() const { return bias_; }

 private:
  int apply_events_for(int step) {
    int flags = 0;
    for (const auto& ev : scenario_.events) {
      if (ev.at_step != step) continue;
      switch (ev.kind) {
        case ScenarioEvent::Kind::HeightDrop:
          surface_.height_offset -= ev.magnitude;
          flags |= 1;
          break;
        case ScenarioEvent::Kind::ForceBias:
          bias_ = ev.magnitude;
          flags |= 2;
          break;
      }
    }
    return flags;
  }

  Surface surface_;
  Scenario scenario_;
  std::mt19937_64 rng_;
  double bias_ = 0.0;
  int current_step_ = 0;
};

}  // namespace surfwarp
