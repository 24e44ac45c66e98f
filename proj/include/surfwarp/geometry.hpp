#pragma once

// Rotation / pose algebra on unit quaternions, plus the small vector helpers
// used throughout the library.

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <stdexcept>
#include <string>

namespace surfwarp {

using Vec3 = Eigen::Vector3d;

constexpr double kPi = 3.14159265358979323846;

inline bool finite(const Vec3& v) {
  return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

/// Rotation stored as a unit quaternion (w, x, y, z).
///
/// The norm is restored on construction whenever it has drifted by more than
/// 1e-12; exact unit quaternions (identity products, pass-through paths) are
/// left bit-identical.
class Rotation {
 public:
  Rotation() : q_(1.0, 0.0, 0.0, 0.0) {}

  Rotation(double w, double x, double y, double z) : q_(w, x, y, z) {
    if (!std::isfinite(w) || !std::isfinite(x) || !std::isfinite(y) ||
        !std::isfinite(z)) {
      throw std::domain_error("Rotation: non-finite quaternion component");
    }
    const double n2 = q_.squaredNorm();
    if (n2 < 1e-24) {
      throw std::domain_error("Rotation: near-zero quaternion");
    }
    if (std::abs(n2 - 1.0) > 1e-12) {
      q_.coeffs() /= std::sqrt(n2);
    }
  }

  static Rotation identity() { return Rotation(); }

  double w() const { return q_.w(); }
  double x() const { return q_.x(); }
  double y() const { return q_.y(); }
  double z() const { return q_.z(); }

  double norm() const { return q_.norm(); }

  Rotation inverse() const {
    Rotation r;
    r.q_ = q_.conjugate();
    return r;
  }

  /// Hamilton product; the result is renormalized only if it drifted.
  Rotation operator*(const Rotation& rhs) const {
    const Eigen::Quaterniond p = q_ * rhs.q_;
    return Rotation(p.w(), p.x(), p.y(), p.z());
  }

  /// Rotate a vector.
  Vec3 operator*(const Vec3& v) const { return q_ * v; }

  /// 4D quaternion dot product (sign-sensitive).
  double dot(const Rotation& rhs) const {
    return q_.coeffs().dot(rhs.q_.coeffs());
  }

  Eigen::Matrix3d matrix() const { return q_.toRotationMatrix(); }

  /// Componentwise equality (used by the bit-exact pass-through tests).
  bool same_bits(const Rotation& rhs) const {
    return q_.w() == rhs.q_.w() && q_.x() == rhs.q_.x() &&
           q_.y() == rhs.q_.y() && q_.z() == rhs.q_.z();
  }

 private:
  Eigen::Quaterniond q_;
};

/// SE(3) element: unit-quaternion rotation plus position in meters.
struct Pose {
  Rotation rotation;
  Vec3 position{0.0, 0.0, 0.0};

  Pose() = default;
  Pose(const Rotation& r, const Vec3& p) : rotation(r), position(p) {
    if (!finite(p)) {
      throw std::domain_error("Pose: non-finite position");
    }
  }

  bool same_bits(const Pose& rhs) const {
    return rotation.same_bits(rhs.rotation) &&
           position.x() == rhs.position.x() &&
           position.y() == rhs.position.y() &&
           position.z() == rhs.position.z();
  }
};

/// Geodesic distance on SO(3): 2*acos(|q1 . q2|), in [0, pi].
/// Sign-invariant: q and -q give the same answer.
inline double geodesic_angle(const Rotation& r1, const Rotation& r2) {
  const double d = std::min(1.0, std::abs(r1.dot(r2)));
  return 2.0 * std::acos(d);
}

/// Angle between two nonzero vectors, in [0, pi].
inline double angle_between(const Vec3& u, const Vec3& v) {
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu <= 1e-12 || nv <= 1e-12) {
    throw std::domain_error("angle_between: near-zero vector");
  }
  const double c = std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
  return std::acos(c);
}

/// Rotation of `angle` radians about `axis` (expected unit length).
/// A sub-unit axis yields a proportionally attenuated rotation after the
/// quaternion is renormalized, which is what the regularized correction
/// axes in the online filter rely on.
inline Rotation exp_rotation(const Vec3& axis, double angle) {
  const double h = 0.5 * angle;
  const double s = std::sin(h);
  return Rotation(std::cos(h), s * axis.x(), s * axis.y(), s * axis.z());
}

/// Minimal rotation taking unit vector u onto unit vector v.
///
/// Antipodal pairs (angle > pi - 1e-6) rotate by pi about a deterministic
/// perpendicular: the largest-norm cross product of u with the coordinate
/// axes, normalized.
inline Rotation rotation_between(const Vec3& u_in, const Vec3& v_in) {
  const Vec3 u = u_in.normalized();
  const Vec3 v = v_in.normalized();
  const double d = std::clamp(u.dot(v), -1.0, 1.0);
  if (d >= 1.0 - 1e-15) {
    return Rotation::identity();  // below rounding noise; keep exact poses exact
  }
  if (d < std::cos(kPi - 1e-6)) {
    Vec3 best = Vec3::UnitX().cross(u);
    for (const Vec3& cand : {Vec3(Vec3::UnitY().cross(u)),
                             Vec3(Vec3::UnitZ().cross(u))}) {
      if (cand.norm() > best.norm()) {
        best = cand;
      }
    }
    return exp_rotation(best.normalized(), kPi);
  }
  const Vec3 c = u.cross(v);
  // Half-angle construction: (1 + u.v, u x v) normalizes to the minimal
  // rotation quaternion.
  return Rotation(1.0 + d, c.x(), c.y(), c.z());
}

}  // namespace surfwarp
