#pragma once

// Scenario orchestration: free flight toward a standoff pose, switch to the
// interaction selection mask with a ramped force reference, per-step contact
// resolution / estimation / control / integration, trace logging, and the
// sweep driver.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "passalign/contact.hpp"
#include "passalign/controller.hpp"
#include "passalign/dynamics.hpp"
#include "passalign/metrics.hpp"
#include "passalign/scenario.hpp"
#include "passalign/trace_io.hpp"
#include "passalign/types.hpp"

namespace passalign {

inline double force_reference_at(const Scenario& sc, double t) {
  if (t < sc.phases.switch_time) return 0.0;
  return std::min(sc.controller.f_ref,
                  sc.phases.f_ref_ramp * (t - sc.phases.switch_time));
}

// Smoothstep position ramp from the start pose to the standoff pose; the
// reference then holds there for the rest of the run.
inline Reference reference_at(const Vec3& p_start, const Vec3& p_standoff,
                              const Quat& q_ref, double switch_time,
                              double t) {
  const double t0 = 0.1 * switch_time;
  const double t1 = 0.9 * switch_time;
  double s = clamp((t - t0) / (t1 - t0), 0.0, 1.0);
  s = s * s * (3.0 - 2.0 * s);
  Reference ref;
  ref.position = p_start + s * (p_standoff - p_start);
  ref.orientation = q_ref;
  return ref;
}

struct SimResult {
  Trace trace;
  Report report;
  WorkSurface surface;
  bool diverged = false;
};

inline SimResult simulate_scenario(const Scenario& sc) {
  sc.validate();
  const InertiaModel& inertia = sc.inertia;
  const EEGeometry& geom = sc.ee;

  BodyState state;
  const Vec3 p_start = state.position;
  const Quat q_ref = state.orientation;
  const WorkSurface surface = make_surface(sc, cc_position(state, geom));
  ContactParams contact_params = sc.contact;
  contact_params.dt = sc.dt;
  contact_params.effective_mass = inertia.mass / 3.0;
  const Vec3 n = surface.normal.vec();
  const Vec3 p_standoff =
      p_start - (sc.phases.approach_start_gap - sc.phases.standoff_gap) * n;

  PiState pi;
  EstimatorState est = EstimatorState::initialized(
      inertia, state.twist, Vec6::Constant(sc.estimator_gain));
  Wrench w_a_prev = -gravity_wrench(state.orientation, inertia.mass);

  const auto n_steps = static_cast<long>(std::llround(sc.duration / sc.dt));
  SimResult out;
  out.surface = surface;
  out.trace.dt = sc.dt;
  out.trace.rows.reserve(static_cast<std::size_t>(n_steps));
  bool touched = false;

  for (long k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * sc.dt;
    const bool interacting = t >= sc.phases.switch_time;

    const ContactResolution res =
        resolve_contact(state, geom, surface, contact_params);
    touched = touched || res.contact_count > 0;

    Wrench w_e = res.wrench_on_body;
    if (interacting && touched) {
      w_e.torque +=
          disturbance_torque(sc.disturbance, t - sc.phases.switch_time);
    }

    const Wrench grav = gravity_wrench(state.orientation, inertia.mass);
    const Vec6 cor = coriolis_term(inertia, state.twist);
    const EstimateResult est_out =
        estimate_wrench(est, state.twist, w_a_prev, inertia, grav, cor, sc.dt);
    est = est_out.state;

    const Reference ref = reference_at(p_start, p_standoff, q_ref,
                                       sc.phases.switch_time, t);
    const Vec6 lambda =
        interacting ? interaction_selection() : free_flight_selection();
    const Wrench w_mot = motion_wrench(state, ref, inertia, sc.controller);
    const double f_ref_now = force_reference_at(sc, t);
    Wrench w_f{};
    if (interacting) {
      auto [wf, pi_next] =
          force_wrench(est_out.f_est_z, pi, sc.controller, f_ref_now, sc.dt);
      w_f = wf;
      pi = pi_next;
    }
    const Wrench w_a = hybrid_wrench(w_mot, w_f, cor, -grav, lambda);

    const Vec6 applied = lambda.cwiseProduct(w_mot.stacked()) + w_f.stacked();
    const Indicators ind = indicators_from_state(
        state, res, applied.head<3>(), surface, geom,
        sc.contact.pressure_threshold);
    const auto pressures = pressure_readings(res, sc.contact.pressure_threshold);

    TraceRow row;
    row.t = t;
    row.position = state.position;
    row.orientation = state.orientation;
    row.twist = state.twist;
    row.contact_count = res.contact_count;
    row.beta = ind.beta;
    row.theta = ind.theta;
    row.d_cc = ind.d_cc;
    row.mu = ind.mu;
    row.fn_total = res.total_f_n;
    row.ft_total = res.total_f_t;
    for (int j = 0; j < 3; ++j) row.pressures[j] = pressures[j].value;
    row.f_est_z = est_out.f_est_z;
    row.f_ref = f_ref_now;
    row.slip_mask = res.slip_mask();
    out.trace.rows.push_back(row);

    const Vec3 z_body = state.orientation.toRotationMatrix().col(2);
    const double misalign =
        std::acos(clamp(z_body.dot(-n), -1.0, 1.0));
    if (misalign > deg2rad(45.0) ||
        (state.position - ref.position).norm() > 1.0) {
      out.diverged = true;
      break;
    }

    try {
      state = step(state, w_a, w_e, inertia, sc.dt);
    } catch (const NonFiniteState&) {
      out.diverged = true;
      break;
    }
    w_a_prev = w_a;
  }

  try {
    out.report = summarize(out.trace, sc.metrics);
  } catch (const TraceTooShort&) {
    // A run that died early still gets a (mostly empty) report.
  }
  out.report.diverged = out.diverged;
  out.report.conditions = build_condition_report(sc.conditions);
  out.report.has_conditions = true;
  out.report.mu_threshold =
      out.report.conditions.mu_lim_beta_max / sc.conditions.eta;
  return out;
}

struct RunArtifacts {
  std::filesystem::path trace_csv;
  std::filesystem::path report_json;
  std::filesystem::path scenario_echo;
  Report report;
  bool diverged = false;
};

inline RunArtifacts run_scenario(const Scenario& sc,
                                 const std::filesystem::path& out_dir) {
  const SimResult result = simulate_scenario(sc);
  RunArtifacts art;
  art.report = result.report;
  art.diverged = result.diverged;
  art.trace_csv = out_dir / (sc.name + "_trace.csv");
  art.report_json = out_dir / (sc.name + "_report.json");
  art.scenario_echo = out_dir / (sc.name + "_scenario.json");

  write_trace_csv(art.trace_csv, result.trace);

  Json rep = report_to_json(result.report);
  rep["name"] = sc.name;
  rep["scenario_hash"] = scenario_hash(sc);
  rep["trace_csv"] = art.trace_csv.filename().string();
  write_file_atomic(art.report_json, rep.dump(2) + "\n");
  write_file_atomic(art.scenario_echo, scenario_to_json(sc).dump(2) + "\n");
  return art;
}

inline std::string format_value(double v) {
  std::string s;
  append_double(s, v);
  for (char& c : s) {
    if (c == '.' || c == '+' || c == '-') c = 'p';
  }
  return s;
}

// Applies a sweep axis to the raw scenario JSON so derived defaults (design
// beta_max, condition inputs) are recomputed by the normal parse path.
inline void apply_axis(Json& j, const std::string& axis, double value) {
  if (axis == "f_ref") {
    j["controller"]["f_ref_n"] = value;
  } else if (axis == "mu_s") {
    const double mu_k_old =
        j.contains("surface") && j["surface"].contains("mu_k")
            ? j["surface"]["mu_k"].get<double>()
            : SurfaceSpec{}.mu_k;
    j["surface"]["mu_s"] = value;
    j["surface"]["mu_k"] = std::min(mu_k_old, value);
  } else if (axis == "beta0") {
    j["surface"]["tilt_deg"] = value;
  } else if (axis == "tau_d") {
    j["disturbance"]["amplitude_nm"] = value;
  } else if (axis == "d_r") {
    j["ee"]["d_r_m"] = value;
  } else {
    throw UnknownAxis("sweep: unknown axis '" + axis + "'");
  }
}

struct SweepResult {
  std::vector<RunArtifacts> runs;
  std::filesystem::path aggregate_csv;
};

inline SweepResult run_sweep(const Json& base, const std::string& axis,
                             const std::vector<double>& values,
                             const std::filesystem::path& out_dir) {
  SweepResult sweep;
  std::string agg;
  agg +=
      "axis,value,name,aligned,slip,slip_any_sample,steady_d_cc_m,"
      "steady_beta_rad,delta,max_mu,mu_threshold,max_slip_run_s,"
      "settling_time_s,diverged,scenario_hash\n";
  for (double value : values) {
    Json j = base;
    apply_axis(j, axis, value);
    Scenario sc = scenario_from_json(j);
    sc.name += "_" + axis + "_" + format_value(value);
    const RunArtifacts art = run_scenario(sc, out_dir);
    sweep.runs.push_back(art);

    const Report& r = art.report;
    agg += axis + ",";
    append_double(agg, value);
    agg += "," + sc.name + ",";
    agg += r.aligned ? "1," : "0,";
    agg += r.slip ? "1," : "0,";
    agg += r.slip_any_sample ? "1," : "0,";
    append_double(agg, r.steady_d_cc);
    agg.push_back(',');
    append_double(agg, r.steady_beta);
    agg.push_back(',');
    append_double(agg, r.delta);
    agg.push_back(',');
    append_double(agg, r.max_mu);
    agg.push_back(',');
    append_double(agg, r.mu_threshold);
    agg.push_back(',');
    append_double(agg, r.max_slip_run_s);
    agg.push_back(',');
    append_double(agg, r.settling_time_s);
    agg.push_back(',');
    agg += r.diverged ? "1," : "0,";
    agg += scenario_hash(sc);
    agg.push_back('\n');
  }
  sweep.aggregate_csv = out_dir / "aggregate.csv";
  write_file_atomic(sweep.aggregate_csv, agg);
  return sweep;
}

}  // namespace passalign
