#pragma once

// Synthetic single-period primitive: a touch-lift-advance-touch cycle in a
// canonical frame, described by tip offsets and contact flags.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "surfwarp/geometry.hpp"

namespace surfwarp {

struct PrimitiveConfig {
  int waypoint_count = 8;
  double dwell_fraction = 0.2;   // fraction of the phase kept in contact
  double lift_height = 0.02;     // meters
  double period_length = 0.2;    // meters of guide arc per period
  double tool_length = 0.1;      // base-to-tip distance, meters

  void validate() const {
    if (waypoint_count < 3) {
      throw std::invalid_argument("PrimitiveConfig: waypoint_count < 3");
    }
    if (dwell_fraction < 0.0 || dwell_fraction >= 1.0) {
      throw std::invalid_argument("PrimitiveConfig: dwell_fraction out of [0,1)");
    }
    if (lift_height < 0.0) {
      throw std::invalid_argument("PrimitiveConfig: negative lift_height");
    }
    if (!(period_length > 0.0)) {
      throw std::invalid_argument("PrimitiveConfig: period_length <= 0");
    }
    if (!(tool_length > 0.0)) {
      throw std::invalid_argument("PrimitiveConfig: tool_length <= 0");
    }
  }
};

struct PrimitiveWaypoint {
  Vec3 tip_offset{0.0, 0.0, 0.0};  // in the primitive frame
  bool contact = false;
};

struct PeriodicPrimitive {
  std::vector<PrimitiveWaypoint> waypoints;
  double period_length = 0.0;
  double tool_length = 0.0;

  void validate() const {
    if (waypoints.size() < 3) {
      throw std::invalid_argument("PeriodicPrimitive: fewer than 3 waypoints");
    }
    if (!(period_length > 0.0) || !(tool_length > 0.0)) {
      throw std::invalid_argument("PeriodicPrimitive: non-positive lengths");
    }
    bool any_contact = false;
    for (const auto& w : waypoints) any_contact |= w.contact;
    if (!any_contact) {
      throw std::invalid_argument("PeriodicPrimitive: no contact waypoint");
    }
  }
};

/// One period of a touch-lift-advance-touch cycle. Waypoints sit at uniform
/// local x spanning [0, period); the final one is nudged inside the half-open
/// period. Waypoints whose phase falls within dwell_fraction of either period
/// edge stay at z = 0, the rest are raised by lift_height. Contact flags are
/// set exactly where z == 0.
inline PeriodicPrimitive extract_primitive(const PrimitiveConfig& config) {
  config.validate();
  const int n = config.waypoint_count;
  const double p = config.period_length;

  PeriodicPrimitive prim;
  prim.period_length = p;
  prim.tool_length = config.tool_length;
  prim.waypoints.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = p * static_cast<double>(i) / static_cast<double>(n - 1);
    if (i == n - 1) {
      x = p * (1.0 - 1e-9);
    }
    const double phase = x / p;
    const double half_dwell = 0.5 * config.dwell_fraction;
    const bool dwelling = phase <= half_dwell || phase >= 1.0 - half_dwell;
    const double z = dwelling ? 0.0 : config.lift_height;
    prim.waypoints.push_back({Vec3(x, 0.0, z), z == 0.0});
  }
  prim.validate();
  return prim;
}

}  // namespace surfwarp
