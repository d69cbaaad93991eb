#pragma once

// Hybrid motion/force control stack. A 6-DoF motion wrench handles pose
// tracking, a PI loop regulates the pushing force along body z from the
// estimated interaction force, and a diagonal selection mask drops the
// compliant axes during interaction so contact torques can rotate the tool
// freely. External wrenches are recovered with a momentum-based observer.

#include <utility>

#include "passalign/dynamics.hpp"
#include "passalign/types.hpp"

namespace passalign {

inline Vec6 free_flight_selection() { return Vec6::Ones(); }

// Drops z-linear and x/y-angular motion control while interacting.
inline Vec6 interaction_selection() {
  Vec6 s;
  s << 1.0, 1.0, 0.0, 0.0, 0.0, 1.0;
  return s;
}

struct ControllerConfig {
  Vec6 d_v = (Vec6() << 12.0, 12.0, 12.0, 0.6, 0.6, 0.6).finished();
  Vec6 k_p = (Vec6() << 30.0, 30.0, 30.0, 3.0, 3.0, 3.0).finished();
  double force_kp = 0.5;          // PI proportional gain, dimensionless
  double force_ki = 2.0;          // PI integral gain, 1/s
  double f_ref = 20.0;            // N, target pushing force
  double integral_limit = 50.0;   // N s, anti-windup clamp

  void validate() const {
    if (d_v.minCoeff() <= 0.0 || k_p.minCoeff() <= 0.0) {
      throw ConfigError("ControllerConfig: D_v and K_p must be positive");
    }
    if (!(force_kp > 0.0) || !(force_ki > 0.0)) {
      throw ConfigError("ControllerConfig: PI gains must be positive");
    }
    if (!(integral_limit > 0.0)) {
      throw ConfigError("ControllerConfig: integral_limit must be positive");
    }
  }
};

struct Reference {
  Vec3 position = Vec3::Zero();         // world
  Quat orientation = Quat::Identity();  // body -> world
  Vec6 twist = Vec6::Zero();            // body frame
  Vec6 accel = Vec6::Zero();            // body frame
};

// Pose error stacked as [body-frame position error; rotation-vector error].
inline Vec6 pose_error(const BodyState& state, const Reference& ref) {
  Vec6 e;
  e.head<3>() = state.orientation.toRotationMatrix().transpose() *
                (state.position - ref.position);
  e.tail<3>() = quat_log(ref.orientation.conjugate() * state.orientation);
  return e;
}

inline Wrench motion_wrench(const BodyState& state, const Reference& ref,
                            const InertiaModel& inertia,
                            const ControllerConfig& cfg) {
  const Vec6 e_v = state.twist - ref.twist;
  const Vec6 e_p = pose_error(state, ref);
  const Vec6 w = inertia.mass_matrix() * ref.accel -
                 cfg.d_v.asDiagonal() * e_v - cfg.k_p.asDiagonal() * e_p;
  return Wrench::from_stacked(w);
}

struct PiState {
  double integral = 0.0;  // N s
};

// PI force regulation along body z. f_est_z is the estimated force pressed
// into the surface; positive output pushes the tool toward it.
inline std::pair<Wrench, PiState> force_wrench(double f_est_z,
                                               const PiState& pi,
                                               const ControllerConfig& cfg,
                                               double f_ref, double dt) {
  if (!(dt > 0.0)) throw ConfigError("force_wrench: dt must be positive");
  const double e_f = f_est_z - f_ref;
  PiState next;
  next.integral = clamp(pi.integral + e_f * dt, -cfg.integral_limit,
                        cfg.integral_limit);
  const double fz = f_ref - cfg.force_kp * e_f - cfg.force_ki * next.integral;
  return {Wrench{Vec3(0.0, 0.0, fz), Vec3::Zero()}, next};
}

// Componentwise combination: selection-masked motion wrench plus force
// wrench plus the model compensation terms supplied by the caller.
inline Wrench hybrid_wrench(const Wrench& w_mot, const Wrench& w_f,
                            const Vec6& coriolis, const Wrench& g_comp,
                            const Vec6& lambda) {
  const Vec6 w = lambda.cwiseProduct(w_mot.stacked()) + w_f.stacked() +
                 coriolis + g_comp.stacked();
  return Wrench::from_stacked(w);
}

struct EstimatorState {
  Vec6 momentum_estimate = Vec6::Zero();  // p_hat
  Wrench wrench_estimate{};               // w_hat_e, body frame
  Vec6 gain = Vec6::Constant(10.0);       // K_0 diagonal, 1/s

  static EstimatorState initialized(const InertiaModel& inertia,
                                    const Vec6& twist,
                                    const Vec6& gain_diag) {
    EstimatorState est;
    est.momentum_estimate = inertia.mass_matrix() * twist;
    est.gain = gain_diag;
    return est;
  }
};

struct EstimateResult {
  EstimatorState state;
  double f_est_z = 0.0;  // force pressed on the surface along body z, N
};

// Momentum observer: integrate the modeled momentum with the previous wrench
// estimate standing in for the true external wrench, then correct from the
// measured momentum residual. Converges to a constant w_e with per-axis time
// constant 1/K_0.
inline EstimateResult estimate_wrench(const EstimatorState& est,
                                      const Vec6& twist, const Wrench& w_a,
                                      const InertiaModel& inertia,
                                      const Wrench& gravity,
                                      const Vec6& coriolis, double dt) {
  if (!(dt > 0.0)) throw ConfigError("estimate_wrench: dt must be positive");
  EstimateResult out;
  out.state = est;
  out.state.momentum_estimate +=
      dt * (w_a.stacked() + gravity.stacked() - coriolis +
            est.wrench_estimate.stacked());
  const Vec6 residual =
      inertia.mass_matrix() * twist - out.state.momentum_estimate;
  out.state.wrench_estimate =
      Wrench::from_stacked(est.gain.cwiseProduct(residual));
  out.f_est_z = -out.state.wrench_estimate.force.z();
  return out;
}

}  // namespace passalign
