#pragma once

// Analytic height-field surfaces z = f(x) (extruded in y) and the guide
// curves embedded in them.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "surfwarp/geometry.hpp"

namespace surfwarp {

enum class SurfaceFamily { Sin, Cos, Exp, Parabolic, Cubic };

inline const char* family_name(SurfaceFamily f) {
  switch (f) {
    case SurfaceFamily::Sin: return "sin";
    case SurfaceFamily::Cos: return "cos";
    case SurfaceFamily::Exp: return "exp";
    case SurfaceFamily::Parabolic: return "parabolic";
    case SurfaceFamily::Cubic: return "cubic";
  }
  throw std::invalid_argument("family_name: unknown family");
}

inline SurfaceFamily family_from_string(const std::string& s) {
  if (s == "sin") return SurfaceFamily::Sin;
  if (s == "cos") return SurfaceFamily::Cos;
  if (s == "exp") return SurfaceFamily::Exp;
  if (s == "parabolic") return SurfaceFamily::Parabolic;
  if (s == "cubic") return SurfaceFamily::Cubic;
  throw std::invalid_argument("unknown surface family: " + s);
}

/// Height field z = f(x):
///   sin        -> h0 + A*sin(w*x)
///   cos        -> h0 + A*cos(w*x)
///   exp        -> h0 + A*exp(-k*x^2)
///   parabolic  -> h0 + A*x^2
///   cubic      -> h0 + A*x^3
struct Surface {
  SurfaceFamily family = SurfaceFamily::Sin;
  double amplitude = 0.05;      // A, meters
  double frequency = 1.0;       // w, rad/m (sin/cos)
  double scale = 1.0;           // k, 1/m^2 (exp)
  double height_offset = 0.0;   // h0, meters; mutable for the drop scenario

  double height(double x) const {
    if (!std::isfinite(x)) {
      throw std::domain_error("Surface::height: non-finite x");
    }
    switch (family) {
      case SurfaceFamily::Sin:
        return height_offset + amplitude * std::sin(frequency * x);
      case SurfaceFamily::Cos:
        return height_offset + amplitude * std::cos(frequency * x);
      case SurfaceFamily::Exp:
        return height_offset + amplitude * std::exp(-scale * x * x);
      case SurfaceFamily::Parabolic:
        return height_offset + amplitude * x * x;
      case SurfaceFamily::Cubic:
        return height_offset + amplitude * x * x * x;
    }
    throw std::domain_error("Surface::height: unknown family");
  }

  /// Analytic df/dx.
  double slope(double x) const {
    if (!std::isfinite(x)) {
      throw std::domain_error("Surface::slope: non-finite x");
    }
    switch (family) {
      case SurfaceFamily::Sin:
        return amplitude * frequency * std::cos(frequency * x);
      case SurfaceFamily::Cos:
        return -amplitude * frequency * std::sin(frequency * x);
      case SurfaceFamily::Exp:
        return -2.0 * amplitude * scale * x * std::exp(-scale * x * x);
      case SurfaceFamily::Parabolic:
        return 2.0 * amplitude * x;
      case SurfaceFamily::Cubic:
        return 3.0 * amplitude * x * x;
    }
    throw std::domain_error("Surface::slope: unknown family");
  }

  /// Upward unit normal, normalize((-f'(x), 0, 1)).
  Vec3 normal(double x) const {
    const double g = slope(x);
    return Vec3(-g, 0.0, 1.0).normalized();
  }
};

inline double surface_height(const Surface& s, double x) { return s.height(x); }
inline Vec3 surface_normal(const Surface& s, double x) { return s.normal(x); }

/// Polyline embedded in a surface with cumulative chord arc length.
struct GuideCurve {
  std::vector<Vec3> samples;
  std::vector<double> cumulative_arclength;

  GuideCurve(std::vector<Vec3> pts, const Surface& surface)
      : samples(std::move(pts)) {
    if (samples.size() < 2) {
      throw std::domain_error("GuideCurve: need at least 2 samples");
    }
    cumulative_arclength.resize(samples.size());
    cumulative_arclength[0] = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double dz = samples[i].z() - surface.height(samples[i].x());
      if (std::abs(dz) > 1e-9) {
        throw std::domain_error("GuideCurve: sample off the surface");
      }
      if (i > 0) {
        const double step = (samples[i] - samples[i - 1]).norm();
        cumulative_arclength[i] = cumulative_arclength[i - 1] + step;
        if (!(cumulative_arclength[i] > cumulative_arclength[i - 1])) {
          throw std::domain_error("GuideCurve: arc length not increasing");
        }
      }
    }
  }

  double total_arclength() const { return cumulative_arclength.back(); }

  /// Point at arc length s, by linear interpolation between samples.
  /// If the nearest sample (in arc length) is within snap_tol, that sample
  /// is returned exactly.
  Vec3 point_at_arclength(double s, double snap_tol) const {
    const auto& cum = cumulative_arclength;
    if (s <= cum.front()) return samples.front();
    if (s >= cum.back()) return samples.back();
    const auto it = std::upper_bound(cum.begin(), cum.end(), s);
    const std::size_t hi = static_cast<std::size_t>(it - cum.begin());
    const std::size_t lo = hi - 1;
    const double d_lo = s - cum[lo];
    const double d_hi = cum[hi] - s;
    if (std::min(d_lo, d_hi) <= snap_tol) {
      return d_lo <= d_hi ? samples[lo] : samples[hi];
    }
    const double t = d_lo / (cum[hi] - cum[lo]);
    return samples[lo] + t * (samples[hi] - samples[lo]);
  }
};

/// Lift n uniformly x-spaced samples onto the surface over [x_start, x_end].
inline GuideCurve build_guide(const Surface& surface, double x_start,
                              double x_end, std::size_t n) {
  if (!(x_end > x_start) || n < 2) {
    throw std::domain_error("build_guide: invalid range or sample count");
  }
  std::vector<Vec3> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x =
        x_start + (x_end - x_start) * static_cast<double>(i) /
                      static_cast<double>(n - 1);
    pts.emplace_back(x, 0.0, surface.height(x));
  }
  return GuideCurve(std::move(pts), surface);
}

}  // namespace surfwarp
