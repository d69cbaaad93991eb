#pragma once

// Closed-form conditions guaranteeing passive alignment: the friction-ensuring
// inequality (Condition 1), the rotation-ensuring inequality (Condition 2),
// the in-plane pendulum model, and the design-guideline calculators.

#include <cmath>

#include "passalign/indicators.hpp"
#include "passalign/types.hpp"

namespace passalign {

struct ConditionInputs {
  double beta_max = deg2rad(6.0);  // rad, worst-case |beta|
  double mu_s = 0.6;               // static friction coefficient
  double eta = 0.4;                // safety factor in (0, 1]
  double f_B_mag = 20.0;           // N, driving force magnitude
  double d_r = 0.0525;             // m
  double tau_d_max = 0.5;          // N m, disturbance torque bound
  double mass = 3.0;               // kg
  double l_c_p = 0.3;              // m, projected CoP->CoM distance

  void validate() const {
    if (!(eta > 0.0 && eta <= 1.0)) {
      throw ConfigError("ConditionInputs: eta must be in (0, 1]");
    }
    if (mu_s < 0.0 || f_B_mag < 0.0 || d_r < 0.0 || tau_d_max < 0.0 ||
        mass < 0.0 || l_c_p < 0.0) {
      throw ConfigError("ConditionInputs: magnitudes must be nonnegative");
    }
    if (!(std::sqrt(3.0) * std::sin(std::abs(beta_max)) < 1.0)) {
      throw ConfigError("ConditionInputs: beta_max must satisfy "
                        "sqrt(3) sin|beta| < 1");
    }
  }
};

struct Condition1Result {
  bool satisfied = false;
  double margin = 0.0;    // eta*mu_s - mu_lim(beta_max)
  double min_mu_s = 0.0;  // mu_lim(beta_max)/eta
};

// Condition 1: mu_lim(|beta|_max) <= eta * mu_S.
inline Condition1Result check_condition1(double beta_max, double mu_s,
                                         double eta) {
  const double lim = mu_lim(beta_max);
  Condition1Result r;
  r.margin = eta * mu_s - lim;
  r.satisfied = r.margin >= 0.0;
  r.min_mu_s = lim / eta;
  return r;
}

struct Condition2Result {
  bool satisfied = false;
  double margin = 0.0;     // N m, lhs - tau_d_max
  double min_force = 0.0;  // N
};

// Condition 2: |f^B| sqrt(1 - 3 sin^2(beta_max)) d_r/2 > |tau_d|_max.
inline Condition2Result check_condition2(double f_B_mag, double beta_max,
                                         double d_r, double tau_d_max) {
  const double s = std::sin(std::abs(beta_max));
  const double den = 1.0 - 3.0 * s * s;
  if (den <= 0.0) {
    throw OutOfValidRange("check_condition2: 3 sin^2(beta_max) >= 1");
  }
  if (!(d_r > 0.0)) {
    throw ConfigError("check_condition2: d_r must be positive");
  }
  const double lever = std::sqrt(den) * d_r / 2.0;
  Condition2Result r;
  r.margin = f_B_mag * lever - tau_d_max;
  r.satisfied = r.margin > 0.0;
  r.min_force = tau_d_max / lever;
  return r;
}

// Smallest tool radius for which Condition 2 holds with equality at the given
// force; sizing guideline for the end-effector.
inline double min_ee_radius(double f_B_mag, double beta_max,
                            double tau_d_max) {
  if (f_B_mag <= 0.0) throw ZeroForce("min_ee_radius: force must be positive");
  const double s = std::sin(std::abs(beta_max));
  const double den = 1.0 - 3.0 * s * s;
  if (den <= 0.0) {
    throw OutOfValidRange("min_ee_radius: 3 sin^2(beta_max) >= 1");
  }
  return 2.0 * tau_d_max / (f_B_mag * std::sqrt(den));
}

// Torque of the in-plane driving force about the CoP. Magnitude
// |f_plane| * |l_O|; the sign restores beta toward zero.
inline double tau_e_p(double f_plane_mag, double l_O_len, double beta) {
  return -sign(beta) * f_plane_mag * l_O_len;
}

// beta'' of the simplified pendulum in the S plane.
inline double pendulum_accel(double mass, double l_c_p, double tau_ep,
                             double tau_d) {
  const double inertia = mass * l_c_p * l_c_p;
  if (inertia <= 1e-12) {
    throw ZeroInertia("pendulum_accel: vanishing pendulum inertia");
  }
  return (tau_ep - tau_d) / inertia;
}

// Both conditions plus the derived hardware guidelines, evaluated at full
// precision. Display rounding is left to the presentation layer.
struct ConditionReport {
  bool cond1_satisfied = false;
  double cond1_margin = 0.0;
  double min_mu_s = 0.0;
  bool cond2_satisfied = false;
  double cond2_margin = 0.0;  // N m
  double min_force = 0.0;     // N
  double min_d_r = 0.0;       // m, for the given force
  double mu_lim_beta_max = 0.0;
};

inline ConditionReport build_condition_report(const ConditionInputs& in) {
  in.validate();
  const auto c1 = check_condition1(in.beta_max, in.mu_s, in.eta);
  const auto c2 = check_condition2(in.f_B_mag, in.beta_max, in.d_r,
                                   in.tau_d_max);
  ConditionReport rep;
  rep.cond1_satisfied = c1.satisfied;
  rep.cond1_margin = c1.margin;
  rep.min_mu_s = c1.min_mu_s;
  rep.cond2_satisfied = c2.satisfied;
  rep.cond2_margin = c2.margin;
  rep.min_force = c2.min_force;
  rep.min_d_r = in.f_B_mag > 0.0
                    ? min_ee_radius(in.f_B_mag, in.beta_max, in.tau_d_max)
                    : 0.0;
  rep.mu_lim_beta_max = mu_lim(in.beta_max);
  return rep;
}

}  // namespace passalign
