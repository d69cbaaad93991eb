#pragma once

// Contact between the three spherical feet of the end-effector and a flat
// work surface. Normal forces follow a Kelvin-Voigt penalty law; tangential
// forces use velocity-threshold regularized Coulomb friction. The resolver
// also produces the center of pressure, the levers used by the alignment
// indicators, and per-foot pressure readings.

#include <array>
#include <cmath>

#include "passalign/dynamics.hpp"
#include "passalign/indicators.hpp"
#include "passalign/types.hpp"

namespace passalign {

struct WorkSurface {
  Vec3 point = Vec3::Zero();                 // any point on the plane, world
  UnitVec3 normal{Vec3(0.0, 0.0, -1.0)};     // away from surface, toward body
  double mu_s = 0.6;
  double mu_k = 0.5;

  void validate() const {
    if (!(mu_s >= 0.0) || !(mu_k >= 0.0)) {
      throw ConfigError("WorkSurface: friction coefficients must be >= 0");
    }
    if (mu_k > mu_s + 1e-12) {
      throw ConfigError("WorkSurface: mu_k must not exceed mu_s");
    }
  }
};

struct ContactParams {
  double k_n = 1e4;                 // N/m
  double c_n = 50.0;                // N s/m
  double v_eps = 1e-4;              // m/s, stick/slip velocity threshold
  double pressure_threshold = 0.5;  // N, sensor contact threshold
  // No-overshoot clamp for the friction force under fixed-step integration:
  // the force applied over one step dt never exceeds what would stop the
  // foot's tangential motion outright, so stiction can capture a foot
  // instead of chattering around zero velocity.
  double dt = 1e-3;                 // s, integrator step the forces feed
  double effective_mass = 1.0;      // kg, per-foot tangential inertia

  void validate() const {
    if (!(k_n > 0.0) || !(c_n >= 0.0) || !(v_eps > 0.0) ||
        !(pressure_threshold >= 0.0)) {
      throw ConfigError("ContactParams: k_n > 0, c_n >= 0, v_eps > 0 required");
    }
    if (!(dt > 0.0) || !(effective_mass > 0.0)) {
      throw ConfigError("ContactParams: dt and effective_mass must be > 0");
    }
  }
};

struct FootContact {
  int foot_index = 1;  // 1..3
  bool in_contact = false;
  double penetration = 0.0;           // m, >= 0
  double normal_force = 0.0;          // N, >= 0
  Vec3 tangential_force = Vec3::Zero();  // world frame, N
  bool slipping = false;
};

struct ContactResolution {
  std::array<FootContact, 3> feet{};
  int contact_count = 0;
  bool cop_valid = false;
  Vec3 cop = Vec3::Zero();      // world
  Vec3 l_O = Vec3::Zero();      // CoP -> CC, world
  Vec3 l_C = Vec3::Zero();      // CoP -> CoM, world
  Wrench wrench_on_body{};      // body frame, about CoM
  double total_f_n = 0.0;       // sum of normal force magnitudes
  double total_f_t = 0.0;       // magnitude of the net tangential force

  int slip_mask() const {
    int m = 0;
    for (int j = 0; j < 3; ++j) {
      if (feet[j].slipping) m |= (1 << j);
    }
    return m;
  }
};

struct PressureReading {
  double value = 0.0;  // N
  bool in_contact = false;
};

inline Vec3 cc_position(const BodyState& state, const EEGeometry& geom) {
  return state.position + state.orientation.toRotationMatrix() * geom.cc_offset;
}

// Foot j sits at angle {0, 120, 240} deg on the d_r circle around the CC.
inline std::array<Vec3, 3> foot_positions(const BodyState& state,
                                          const EEGeometry& geom) {
  const Mat3 r = state.orientation.toRotationMatrix();
  std::array<Vec3, 3> out;
  for (int j = 0; j < 3; ++j) {
    const double a = geom.foot_angles[j];
    const Vec3 r_body =
        geom.cc_offset + geom.d_r * Vec3(std::cos(a), std::sin(a), 0.0);
    out[j] = state.position + r * r_body;
  }
  return out;
}

inline ContactResolution resolve_contact(const BodyState& state,
                                         const EEGeometry& geom,
                                         const WorkSurface& surface,
                                         const ContactParams& params) {
  const Mat3 r = state.orientation.toRotationMatrix();
  const Vec3 n = surface.normal.vec();
  const Vec3 v_lin_w = r * state.twist.head<3>();
  const Vec3 w_w = r * state.twist.tail<3>();
  const auto feet_pos = foot_positions(state, geom);

  ContactResolution res;
  Vec3 force_total_w = Vec3::Zero();
  Vec3 torque_total_w = Vec3::Zero();
  Vec3 tangential_sum = Vec3::Zero();
  Vec3 cop_acc = Vec3::Zero();
  Vec3 hull_acc = Vec3::Zero();
  double weight_acc = 0.0;

  for (int j = 0; j < 3; ++j) {
    FootContact& fc = res.feet[j];
    fc.foot_index = j + 1;
    const Vec3& p = feet_pos[j];
    const double depth = -(p - surface.point).dot(n);
    if (depth <= 0.0) continue;

    fc.in_contact = true;
    fc.penetration = depth;
    ++res.contact_count;
    hull_acc += p;

    const Vec3 v_foot = v_lin_w + w_w.cross(p - state.position);
    const double depth_rate = -v_foot.dot(n);
    fc.normal_force =
        std::max(0.0, params.k_n * depth + params.c_n * depth_rate);

    const Vec3 v_t = v_foot - v_foot.dot(n) * n;
    const double v_t_mag = v_t.norm();
    if (v_t_mag > 0.0) {
      const double cone_s = surface.mu_s * fc.normal_force;
      // Force that would stop the foot's tangential motion within one step.
      const double f_stop = params.effective_mass * v_t_mag / params.dt;
      // Stick demand: linear in velocity inside the regularization band,
      // never more than the stopping force.
      const double f_stick =
          std::min(cone_s * v_t_mag / params.v_eps, f_stop);
      if (f_stick <= cone_s) {
        fc.tangential_force = -(f_stick / v_t_mag) * v_t;
        fc.slipping = false;
      } else {
        const double f_slip =
            std::min(surface.mu_k * fc.normal_force, f_stop);
        fc.tangential_force = -(f_slip / v_t_mag) * v_t;
        fc.slipping = true;
      }
    }

    const Vec3 f_world = fc.normal_force * n + fc.tangential_force;
    force_total_w += f_world;
    torque_total_w += (p - state.position).cross(f_world);
    tangential_sum += fc.tangential_force;
    cop_acc += fc.normal_force * p;
    weight_acc += fc.normal_force;
    res.total_f_n += fc.normal_force;
  }

  res.total_f_t = tangential_sum.norm();
  res.wrench_on_body =
      Wrench{r.transpose() * force_total_w, r.transpose() * torque_total_w};

  if (res.contact_count > 0) {
    res.cop_valid = true;
    // Force-weighted mean; with all weights zero (fast separation) fall back
    // to the centroid of the touching feet so the levers stay defined.
    res.cop = weight_acc > 0.0 ? Vec3(cop_acc / weight_acc)
                               : Vec3(hull_acc / res.contact_count);
    res.l_O = cc_position(state, geom) - res.cop;
    res.l_C = state.position - res.cop;
  }
  return res;
}

inline std::array<PressureReading, 3> pressure_readings(
    const ContactResolution& res, double threshold = 0.5) {
  std::array<PressureReading, 3> out;
  for (int j = 0; j < 3; ++j) {
    out[j].value = res.feet[j].normal_force;
    out[j].in_contact = out[j].value > threshold;
  }
  return out;
}

}  // namespace passalign
