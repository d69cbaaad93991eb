#pragma once

// Evaluation layer: per-step contact indicators, the pressure-sharing
// quality metric delta, and trace summarization (alignment, slip events,
// steady-state extraction).

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "passalign/conditions.hpp"
#include "passalign/contact.hpp"
#include "passalign/indicators.hpp"
#include "passalign/types.hpp"

namespace passalign {

struct Indicators {
  double beta = 0.0;      // rad, signed in-plane force angle
  double theta = 0.0;     // rad, out-of-plane force angle
  double d_cc = 0.0;      // m, lever-based when the S-plane exists
  double d_cc_geo = 0.0;  // m, gap between CC and surface along the normal
  double mu = 0.0;        // measured net tangential/normal force ratio
};

// Contact-status indicators for one instant. With one or two feet down the
// force decomposition in the S-plane applies; full contact, no contact, or a
// degenerate lever all collapse to the aligned (beta = 0) case.
inline Indicators indicators_from_state(const BodyState& state,
                                        const ContactResolution& res,
                                        const Vec3& f_b_applied,
                                        const WorkSurface& surface,
                                        const EEGeometry& geom,
                                        double mu_force_floor = 0.5) {
  Indicators ind;
  const Vec3 n = surface.normal.vec();
  ind.d_cc_geo =
      std::max(0.0, (cc_position(state, geom) - surface.point).dot(n));
  ind.d_cc = ind.d_cc_geo;
  if (res.total_f_n > mu_force_floor) {
    ind.mu = res.total_f_t / res.total_f_n;
  }

  if (res.contact_count == 1 || res.contact_count == 2) {
    const auto plane = try_build_s_plane(surface.normal, res.l_O);
    if (plane) {
      const Vec3 f_world =
          state.orientation.toRotationMatrix() * f_b_applied;
      try {
        const ForceDecomposition dec =
            decompose_force(f_world, *plane, surface.normal);
        ind.beta = dec.beta;
        ind.theta = dec.theta;
        ind.d_cc = d_cc(res.l_O.norm(), dec.beta);
      } catch (const ZeroForce&) {
      } catch (const WrongSide&) {
      }
    }
  }
  return ind;
}

// One logged simulation step; field order mirrors the CSV trace schema.
struct TraceRow {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();
  Vec6 twist = Vec6::Zero();
  int contact_count = 0;
  double beta = 0.0;
  double theta = 0.0;
  double d_cc = 0.0;
  double mu = 0.0;
  double fn_total = 0.0;
  double ft_total = 0.0;
  std::array<double, 3> pressures{0.0, 0.0, 0.0};
  double f_est_z = 0.0;
  double f_ref = 0.0;
  int slip_mask = 0;  // bit j-1 set when foot j slips
};

struct Trace {
  double dt = 1e-3;
  std::vector<TraceRow> rows;
};

// Average RMSE of the per-foot pressure signals normalized by the ideal
// equal share |f_meas|/3. Samples with |f_meas| below exclude_below are
// skipped; zero means perfectly shared load.
inline double delta_metric(const std::array<std::vector<double>, 3>& pressures,
                           const std::vector<double>& f_meas,
                           double exclude_below = 0.5) {
  const std::size_t n = f_meas.size();
  if (n == 0 || pressures[0].size() != n || pressures[1].size() != n ||
      pressures[2].size() != n) {
    throw EmptySeries("delta_metric: series empty or of mismatched length");
  }
  std::array<double, 3> sq_sum{0.0, 0.0, 0.0};
  std::size_t used = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double ref = std::abs(f_meas[k]) / 3.0;
    if (std::abs(f_meas[k]) < exclude_below) continue;
    ++used;
    for (int j = 0; j < 3; ++j) {
      const double r = pressures[j][k] / ref - 1.0;
      sq_sum[j] += r * r;
    }
  }
  if (used == 0) {
    throw ZeroReference("delta_metric: every sample below the force floor");
  }
  double delta = 0.0;
  for (int j = 0; j < 3; ++j) {
    delta += std::sqrt(sq_sum[j] / static_cast<double>(used));
  }
  return delta / 3.0;
}

struct MetricsParams {
  double steady_window = 2.0;   // s, window at the trace end
  double d_cc_tol = 1e-3;       // m, alignment tolerance on d_CC
  double slip_debounce = 0.05;  // s, minimum slip-run length counted
  double delta_floor = 0.5;     // N, sample exclusion for delta
  // Slip and friction accounting start this long after the first touch;
  // the brief scuffing while the tool seats is impact transient, not the
  // sustained behavior the slip flag and the friction bound refer to.
  double impact_grace = 0.5;    // s

  void validate() const {
    if (!(steady_window > 0.0) || !(d_cc_tol > 0.0) ||
        !(slip_debounce >= 0.0) || !(impact_grace >= 0.0)) {
      throw ConfigError("MetricsParams: window and tolerances must be > 0");
    }
  }
};

struct Report {
  ConditionReport conditions{};
  bool has_conditions = false;
  double steady_d_cc = 0.0;       // m, mean over the steady window
  double steady_beta = 0.0;       // rad, mean over the steady window
  double delta = -1.0;            // -1 when no interaction sample qualified
  double max_mu = 0.0;            // over the interaction phase
  double mu_threshold = -1.0;     // mu_lim(beta_max)/eta, filled with conditions
  bool slip = false;              // any debounced slip run while interacting
  bool slip_any_sample = false;   // any raw slipping sample while interacting
  double max_slip_run_s = 0.0;
  bool aligned = false;
  double settling_time_s = -1.0;  // -1 when never settled
  bool diverged = false;
};

// Interaction phase = rows with a nonzero force reference.
inline bool in_interaction(const TraceRow& row) { return row.f_ref > 0.0; }

inline Report summarize(const Trace& trace, const MetricsParams& params) {
  params.validate();
  if (trace.rows.size() < 2) {
    throw TraceTooShort("summarize: trace needs at least two rows");
  }
  const double t_end = trace.rows.back().t;
  const double duration = t_end - trace.rows.front().t;
  if (duration <= params.steady_window) {
    throw TraceTooShort("summarize: trace shorter than the steady window");
  }

  Report rep;

  double t_touch = -1.0;
  for (const TraceRow& row : trace.rows) {
    if (row.contact_count > 0) {
      t_touch = row.t;
      break;
    }
  }
  const double t_slip_from =
      t_touch < 0.0 ? 0.0 : t_touch + params.impact_grace;

  // Slip runs, per foot, debounced; a run's length counts one dt per sample.
  std::array<int, 3> run{0, 0, 0};
  int max_run = 0;
  for (const TraceRow& row : trace.rows) {
    for (int j = 0; j < 3; ++j) {
      if (in_interaction(row) && row.t >= t_slip_from &&
          (row.slip_mask & (1 << j))) {
        ++run[j];
        max_run = std::max(max_run, run[j]);
        rep.slip_any_sample = true;
      } else {
        run[j] = 0;
      }
    }
  }
  rep.max_slip_run_s = max_run * trace.dt;
  rep.slip = rep.max_slip_run_s >= params.slip_debounce - 1e-12;

  std::array<std::vector<double>, 3> pressures;
  std::vector<double> f_meas;
  bool any_interaction = false;
  for (const TraceRow& row : trace.rows) {
    if (!in_interaction(row)) continue;
    any_interaction = true;
    if (row.t >= t_slip_from) rep.max_mu = std::max(rep.max_mu, row.mu);
    for (int j = 0; j < 3; ++j) pressures[j].push_back(row.pressures[j]);
    f_meas.push_back(row.fn_total);
  }
  if (any_interaction) {
    try {
      rep.delta = delta_metric(pressures, f_meas, params.delta_floor);
    } catch (const ZeroReference&) {
      rep.delta = -1.0;
    }
  }

  const double window_start = t_end - params.steady_window;
  bool window_full_contact = true;
  bool window_slip = false;
  double d_cc_sum = 0.0;
  double beta_sum = 0.0;
  std::size_t window_count = 0;
  std::array<int, 3> wrun{0, 0, 0};
  for (const TraceRow& row : trace.rows) {
    if (row.t < window_start) continue;
    ++window_count;
    d_cc_sum += row.d_cc;
    beta_sum += row.beta;
    if (row.contact_count != 3) window_full_contact = false;
    for (int j = 0; j < 3; ++j) {
      wrun[j] = (row.slip_mask & (1 << j)) ? wrun[j] + 1 : 0;
      if (wrun[j] * trace.dt >= params.slip_debounce - 1e-12) {
        window_slip = true;
      }
    }
  }
  if (window_count > 0) {
    rep.steady_d_cc = d_cc_sum / static_cast<double>(window_count);
    rep.steady_beta = beta_sum / static_cast<double>(window_count);
  }
  rep.aligned = window_count > 0 && window_full_contact && !window_slip &&
                rep.steady_d_cc < params.d_cc_tol;

  // Earliest time from which alignment holds through the end of the trace.
  double settle = -1.0;
  for (auto it = trace.rows.rbegin(); it != trace.rows.rend(); ++it) {
    if (!in_interaction(*it)) break;
    if (it->contact_count == 3 && it->d_cc < params.d_cc_tol) {
      settle = it->t;
    } else {
      break;
    }
  }
  rep.settling_time_s = settle;
  return rep;
}

}  // namespace passalign
