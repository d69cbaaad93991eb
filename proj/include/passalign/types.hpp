#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <cmath>

#include "passalign/errors.hpp"

namespace passalign {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Quat = Eigen::Quaterniond;

inline constexpr double kUnitNormTol = 1e-9;
inline constexpr double kLengthEps = 1e-6;    // m
inline constexpr double kAngularEps = 1e-6;   // rad
inline constexpr double kForceEps = 1e-9;     // N
inline constexpr double kGravity = 9.81;      // m/s^2

// Unit-length direction. The explicit constructor enforces |v| = 1 within
// kUnitNormTol; normalize() builds one from an arbitrary nonzero vector.
class UnitVec3 {
 public:
  explicit UnitVec3(const Vec3& v) : v_(v) {
    if (std::abs(v.norm() - 1.0) > kUnitNormTol) {
      throw Error("UnitVec3: input is not unit length");
    }
  }

  static UnitVec3 normalize(const Vec3& v) {
    const double n = v.norm();
    if (n <= kLengthEps) {
      throw Error("UnitVec3::normalize: near-zero vector");
    }
    return UnitVec3(Vec3(v / n), Unchecked{});
  }

  const Vec3& vec() const { return v_; }
  operator const Vec3&() const { return v_; }

  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }

 private:
  struct Unchecked {};
  UnitVec3(const Vec3& v, Unchecked) : v_(v) {}
  Vec3 v_;
};

// Body-frame force/torque pair.
struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();

  Vec6 stacked() const {
    Vec6 w;
    w << force, torque;
    return w;
  }

  static Wrench from_stacked(const Vec6& w) {
    return Wrench{w.head<3>(), w.tail<3>()};
  }

  bool is_finite() const { return stacked().allFinite(); }

  Wrench operator+(const Wrench& o) const {
    return Wrench{force + o.force, torque + o.torque};
  }
  Wrench operator-(const Wrench& o) const {
    return Wrench{force - o.force, torque - o.torque};
  }
  Wrench operator-() const { return Wrench{-force, -torque}; }
};

inline double clamp(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

inline double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

inline double deg2rad(double d) { return d * M_PI / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / M_PI; }

}  // namespace passalign
