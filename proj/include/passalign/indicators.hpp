#pragma once

// Geometric/analytic layer for passive-aligning contact: construction of the
// pendulum plane spanned by the surface normal and the CoP->CC lever,
// decomposition of the driving force with respect to that plane, and the
// closed-form contact-status indicators derived from it.

#include <array>
#include <cmath>
#include <optional>

#include "passalign/types.hpp"

namespace passalign {

// 2-D plane spanned by the surface normal n and the lever l_O. Stored as an
// orthonormal right-handed triple (n, tangent, normal_s) where tangent is the
// in-plane direction pointing from the CoP side toward CC.
struct SPlane {
  UnitVec3 normal_s;   // plane normal, unit(n x l_O)
  UnitVec3 normal_n;   // surface normal, lies in the plane
  UnitVec3 tangent;    // normal_s x n, completes the right-handed basis
};

// Driving force split into its in-plane part and the out-of-plane rest.
// theta is the angle between the force and its in-plane projection,
// beta the signed angle from -n to the in-plane part (positive for positive
// rotation about normal_s).
struct ForceDecomposition {
  Vec3 f_plane = Vec3::Zero();  // N
  Vec3 f_out = Vec3::Zero();    // N
  double theta = 0.0;           // rad, [0, pi/2)
  double beta = 0.0;            // rad, (-pi/2, pi/2)
};

// Tripod end-effector geometry: three spherical tips spaced 120 degrees apart
// on a circle of radius d_r around the tool-plate center CC.
struct EEGeometry {
  double d_r = 0.0525;                                   // m
  std::array<double, 3> foot_angles = {0.0, 2.0 * M_PI / 3.0,
                                       4.0 * M_PI / 3.0};  // rad
  Vec3 cc_offset = Vec3(0.0, 0.0, 0.10);                 // CC in body frame, m
  double tip_stiffness = 1.0e4;                          // N/m per foot
  double tip_damping = 50.0;                             // N s/m per foot

  void validate() const {
    if (!(d_r > 0.0)) throw ConfigError("EEGeometry: d_r must be positive");
    for (int a = 0; a < 3; ++a) {
      const double want = 2.0 * M_PI / 3.0;
      const double diff =
          std::remainder(foot_angles[(a + 1) % 3] - foot_angles[a], 2.0 * M_PI);
      if (std::abs(std::abs(diff) - want) > 1e-9) {
        throw ConfigError("EEGeometry: feet must be 120 degrees apart");
      }
    }
  }
};

// Non-throwing S-plane construction. Returns nullopt when |l_O| <= eps_len or
// l_O is parallel to n within the angular tolerance; both correspond to the
// centered full-contact case where the indicator layer uses beta = 0.
inline std::optional<SPlane> try_build_s_plane(const UnitVec3& n,
                                               const Vec3& l_O,
                                               double eps_len = kLengthEps,
                                               double eps_ang = kAngularEps) {
  const double len = l_O.norm();
  if (len <= eps_len) return std::nullopt;
  const Vec3 cross = n.vec().cross(l_O);
  // |cross|/|l_O| = sin(angle between n and l_O)
  if (cross.norm() / len <= eps_ang) return std::nullopt;
  const UnitVec3 ns = UnitVec3::normalize(cross);
  const UnitVec3 t = UnitVec3::normalize(ns.vec().cross(n.vec()));
  return SPlane{ns, n, t};
}

inline SPlane build_s_plane(const UnitVec3& n, const Vec3& l_O,
                            double eps_len = kLengthEps,
                            double eps_ang = kAngularEps) {
  auto plane = try_build_s_plane(n, l_O, eps_len, eps_ang);
  if (!plane) {
    throw DegenerateSPlane("build_s_plane: lever too short or parallel to n");
  }
  return *plane;
}

inline ForceDecomposition decompose_force(const Vec3& f_B, const SPlane& plane,
                                          const UnitVec3& n) {
  if (f_B.norm() <= kForceEps) {
    throw ZeroForce("decompose_force: zero driving force");
  }
  if (f_B.dot(-n.vec()) <= 0.0) {
    throw WrongSide("decompose_force: force does not push toward the surface");
  }
  ForceDecomposition dec;
  dec.f_out = f_B.dot(plane.normal_s.vec()) * plane.normal_s.vec();
  dec.f_plane = f_B - dec.f_out;
  dec.theta = std::atan2(dec.f_out.norm(), dec.f_plane.norm());
  // Signed angle from -n to f_plane, right-hand rule about normal_s.
  dec.beta = std::atan2(dec.f_plane.dot(-plane.tangent.vec()),
                        dec.f_plane.dot(-n.vec()));
  return dec;
}

// Distance from CC to the work surface implied by the lever and tilt angle.
inline double d_cc(double l_O_len, double beta) {
  return l_O_len * std::sin(std::abs(beta));
}

struct LeverBounds {
  double lo = 0.0;  // m
  double hi = 0.0;  // m
};

// Admissible |l_O| interval for a given number of contacting feet.
inline LeverBounds l_o_bounds(int contact_count, double d_r) {
  if (!(d_r > 0.0)) throw BadContactCount("l_o_bounds: d_r must be positive");
  switch (contact_count) {
    case 1:
      return LeverBounds{d_r, d_r};
    case 2:
      return LeverBounds{d_r / 2.0, d_r};
    case 3:
      return LeverBounds{0.0, d_r};
    default:
      throw BadContactCount("l_o_bounds: contact count must be 1, 2 or 3");
  }
}

// Supremum of the out-of-plane angle before a second foot would touch the
// surface: asin(sqrt(3) sin|beta|). The underlying inequality is strict;
// callers treat the returned value as an exclusive bound.
inline double theta_max_bound(double beta) {
  const double s = std::sqrt(3.0) * std::sin(std::abs(beta));
  if (s >= 1.0) {
    throw OutOfValidRange("theta_max_bound: sqrt(3) sin|beta| >= 1");
  }
  return std::asin(s);
}

struct ContactRatio {
  double f_n = 0.0;  // N
  double f_t = 0.0;  // N
  double mu = 0.0;   // dimensionless
};

// Normal/tangential contact force magnitudes and their ratio implied by a
// driving-force decomposition.
inline ContactRatio contact_ratio(const ForceDecomposition& dec) {
  const double fp = dec.f_plane.norm();
  const double fo = dec.f_out.norm();
  const double f_n = fp * std::cos(dec.beta);
  if (f_n <= kForceEps) {
    throw ZeroNormalForce("contact_ratio: vanishing normal force");
  }
  const double st = fp * std::sin(std::abs(dec.beta));
  const double f_t = std::sqrt(st * st + fo * fo);
  return ContactRatio{f_n, f_t, f_t / f_n};
}

// Upper boundary of the contact-force ratio over all admissible theta:
// tan|beta| sqrt(1 + 3/(1 - 3 sin^2|beta|)). Valid while 3 sin^2|beta| < 1.
inline double mu_lim(double beta) {
  const double s = std::sin(std::abs(beta));
  const double den = 1.0 - 3.0 * s * s;
  if (den <= 0.0) {
    throw OutOfValidRange("mu_lim: 3 sin^2|beta| >= 1");
  }
  return std::tan(std::abs(beta)) * std::sqrt(1.0 + 3.0 / den);
}

}  // namespace passalign
