#pragma once

// Rigid-body equations of motion in the body frame with a fixed-step
// semi-implicit Euler integrator. The state is pose plus body-frame twist;
// the orientation update uses the quaternion exponential, which is exact for
// constant angular velocity over the step.

#include <cmath>

#include "passalign/types.hpp"

namespace passalign {

struct BodyState {
  Vec3 position = Vec3::Zero();        // world, m
  Quat orientation = Quat::Identity(); // body -> world
  Vec6 twist = Vec6::Zero();           // [v_lin; v_ang], body frame

  Vec3 linear_velocity() const { return twist.head<3>(); }
  Vec3 angular_velocity() const { return twist.tail<3>(); }
};

struct InertiaModel {
  double mass = 3.0;                                  // kg
  Mat3 inertia = Vec3(0.03, 0.03, 0.05).asDiagonal(); // kg m^2

  Mat6 mass_matrix() const {
    Mat6 m = Mat6::Zero();
    m.topLeftCorner<3, 3>() = mass * Mat3::Identity();
    m.bottomRightCorner<3, 3>() = inertia;
    return m;
  }

  void validate() const {
    if (!(mass > 0.0)) throw ConfigError("InertiaModel: mass must be positive");
    if (!inertia.isApprox(inertia.transpose(), 1e-12)) {
      throw ConfigError("InertiaModel: inertia must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat3> es(inertia);
    if (es.eigenvalues().minCoeff() <= 0.0) {
      throw ConfigError("InertiaModel: inertia must be positive definite");
    }
  }
};

// Quaternion exponential of a rotation vector.
inline Quat quat_exp(const Vec3& rotvec) {
  const double angle = rotvec.norm();
  if (angle < 1e-12) {
    Quat q(1.0, 0.5 * rotvec.x(), 0.5 * rotvec.y(), 0.5 * rotvec.z());
    q.normalize();
    return q;
  }
  const Vec3 axis = rotvec / angle;
  return Quat(Eigen::AngleAxisd(angle, axis));
}

// Rotation vector of a unit quaternion (inverse of quat_exp), shortest arc.
inline Vec3 quat_log(const Quat& q_in) {
  Quat q = q_in.w() < 0.0 ? Quat(-q_in.w(), -q_in.x(), -q_in.y(), -q_in.z())
                          : q_in;
  const Vec3 v(q.x(), q.y(), q.z());
  const double vn = v.norm();
  if (vn < 1e-12) return 2.0 * v;
  const double angle = 2.0 * std::atan2(vn, q.w());
  return angle * (v / vn);
}

// Weight of the body expressed in the body frame; torque-free about the CoM.
inline Wrench gravity_wrench(const Quat& orientation, double mass) {
  const Vec3 g_world(0.0, 0.0, -kGravity * mass);
  return Wrench{orientation.toRotationMatrix().transpose() * g_world,
                Vec3::Zero()};
}

// C(v) v with the standard body-frame Coriolis/centrifugal form.
inline Vec6 coriolis_term(const InertiaModel& inertia, const Vec6& twist) {
  const Vec3 v = twist.head<3>();
  const Vec3 w = twist.tail<3>();
  Vec6 c;
  c.head<3>() = inertia.mass * w.cross(v);
  c.tail<3>() = w.cross(inertia.inertia * w);
  return c;
}

// Body-frame acceleration from M vdot + C v = w_a + w_e + gravity.
inline Vec6 acceleration(const BodyState& state, const Wrench& w_a,
                         const Wrench& w_e, const InertiaModel& inertia) {
  const Vec6 rhs = w_a.stacked() + w_e.stacked() +
                   gravity_wrench(state.orientation, inertia.mass).stacked() -
                   coriolis_term(inertia, state.twist);
  Vec6 acc;
  acc.head<3>() = rhs.head<3>() / inertia.mass;
  acc.tail<3>() = inertia.inertia.ldlt().solve(rhs.tail<3>());
  return acc;
}

// One fixed step of semi-implicit Euler: twist first, then pose with the
// updated twist. The quaternion is renormalized every step.
inline BodyState step(const BodyState& state, const Wrench& w_a,
                      const Wrench& w_e, const InertiaModel& inertia,
                      double dt) {
  if (!(dt > 0.0 && dt <= 0.01)) {
    throw ConfigError("step: dt must be in (0, 0.01] s");
  }
  if (!w_a.is_finite() || !w_e.is_finite()) {
    throw NonFiniteState("step: non-finite input wrench");
  }
  BodyState next = state;
  next.twist = state.twist + dt * acceleration(state, w_a, w_e, inertia);
  const Vec3 v_world =
      state.orientation.toRotationMatrix() * next.twist.head<3>();
  next.position = state.position + dt * v_world;
  next.orientation =
      (state.orientation * quat_exp(dt * next.twist.tail<3>())).normalized();
  if (!next.twist.allFinite() || !next.position.allFinite() ||
      !next.orientation.coeffs().allFinite()) {
    throw NonFiniteState("step: state diverged to non-finite values");
  }
  return next;
}

}  // namespace passalign
