#pragma once

// Scenario configuration: JSON load/save with unit-suffixed field names,
// canonical hashing for reproducibility bookkeeping, the seeded disturbance
// torque model, and JSON serialization of run reports.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <random>
#include <string>

#include <json.hpp>

#include "passalign/conditions.hpp"
#include "passalign/contact.hpp"
#include "passalign/controller.hpp"
#include "passalign/dynamics.hpp"
#include "passalign/indicators.hpp"
#include "passalign/metrics.hpp"
#include "passalign/types.hpp"

namespace passalign {

using Json = nlohmann::json;

struct SurfaceSpec {
  double tilt_deg = 6.0;       // initial tool-to-surface angle for a level start
  double tilt_axis_deg = 0.0;  // direction of the tilt axis in the world xy plane
  double mu_s = 0.6;
  double mu_k = 0.5;
};

struct PhaseSchedule {
  double switch_time = 2.0;        // s, free flight -> interaction
  double f_ref_ramp = 10.0;        // N/s
  double standoff_gap = 0.003;     // m, CC-to-surface gap held before the switch
  double approach_start_gap = 0.05;  // m, CC-to-surface gap at t = 0
};

struct DisturbanceSpec {
  std::string type = "random";  // none | constant | sinusoid | random
  double amplitude = 0.5;       // N m
  std::uint64_t seed = 1;
  double hold = 0.1;            // s, resampling interval for the random type
  double freq = 1.0;            // Hz, sinusoid only
};

struct Scenario {
  std::string name = "scenario";
  double dt = 1e-3;
  double duration = 10.0;
  InertiaModel inertia{};
  EEGeometry ee{};
  SurfaceSpec surface{};
  ContactParams contact{};
  ControllerConfig controller{};
  double estimator_gain = 10.0;  // 1/s, diagonal K_0
  PhaseSchedule phases{};
  DisturbanceSpec disturbance{};
  MetricsParams metrics{};
  ConditionInputs conditions{};

  void validate() const {
    if (!(dt > 0.0 && dt <= 0.01)) {
      throw ConfigError("scenario: dt_s must be in (0, 0.01]");
    }
    if (!(duration > phases.switch_time)) {
      throw ConfigError("scenario: duration_s must exceed switch_time_s");
    }
    if (!(phases.switch_time > 0.0) || !(phases.f_ref_ramp > 0.0)) {
      throw ConfigError("scenario: phase schedule must be positive");
    }
    if (!(phases.approach_start_gap > phases.standoff_gap) ||
        !(phases.standoff_gap > 0.0)) {
      throw ConfigError(
          "scenario: approach_start_gap_m must exceed standoff_gap_m > 0");
    }
    if (disturbance.type != "none" && disturbance.type != "constant" &&
        disturbance.type != "sinusoid" && disturbance.type != "random") {
      throw ConfigError("scenario: unknown disturbance type " +
                        disturbance.type);
    }
    if (!(disturbance.amplitude >= 0.0)) {
      throw ConfigError("scenario: disturbance amplitude_nm must be >= 0");
    }
    if (disturbance.type == "random" && !(disturbance.hold > 0.0)) {
      throw ConfigError("scenario: disturbance hold_s must be positive");
    }
    if (!(estimator_gain > 0.0)) {
      throw ConfigError("scenario: estimator_gain_per_s must be positive");
    }
    inertia.validate();
    ee.validate();
    contact.validate();
    controller.validate();
    metrics.validate();
    if (!(surface.mu_s >= 0.0) || !(surface.mu_k >= 0.0) ||
        surface.mu_k > surface.mu_s + 1e-12) {
      throw ConfigError("scenario: need 0 <= mu_k <= mu_s");
    }
    if (!(surface.tilt_deg >= 0.0 && surface.tilt_deg < 45.0)) {
      throw ConfigError("scenario: tilt_deg must be in [0, 45)");
    }
  }
};

// The work surface sits above the starting pose, tilted about a horizontal
// axis, with its normal pointing back down toward the vehicle.
inline WorkSurface make_surface(const Scenario& sc, const Vec3& cc_start) {
  const double a = deg2rad(sc.surface.tilt_axis_deg);
  const Vec3 axis(std::cos(a), std::sin(a), 0.0);
  const Vec3 n =
      Eigen::AngleAxisd(deg2rad(sc.surface.tilt_deg), axis) * Vec3(0, 0, -1);
  WorkSurface surf;
  surf.normal = UnitVec3::normalize(n);
  surf.point = cc_start - sc.phases.approach_start_gap * surf.normal.vec();
  surf.mu_s = sc.surface.mu_s;
  surf.mu_k = sc.surface.mu_k;
  surf.validate();
  return surf;
}

namespace detail {

inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Disturbance torque about the body x/y axes at time t past the mode switch.
// The random type is piecewise constant over `hold` and addressable by
// sample index, so lookups are order-independent and reproducible.
inline Vec3 disturbance_torque(const DisturbanceSpec& d, double t) {
  if (d.type == "none" || d.amplitude <= 0.0 || t < 0.0) return Vec3::Zero();
  if (d.type == "constant") return Vec3(d.amplitude, 0.0, 0.0);
  if (d.type == "sinusoid") {
    return Vec3(d.amplitude * std::sin(2.0 * M_PI * d.freq * t), 0.0, 0.0);
  }
  const auto k = static_cast<std::uint64_t>(std::floor(t / d.hold));
  std::mt19937_64 eng(d.seed + 0x9E3779B97F4A7C15ull * (k + 1));
  eng.discard(8);
  const double angle = 2.0 * M_PI * detail::uniform01(eng);
  const double mag = d.amplitude * detail::uniform01(eng);
  return Vec3(mag * std::cos(angle), mag * std::sin(angle), 0.0);
}

namespace detail {

inline void check_keys(const Json& j, const char* ctx,
                       std::initializer_list<const char*> allowed) {
  if (!j.is_object()) {
    throw ConfigError(std::string("scenario: ") + ctx + " must be an object");
  }
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ConfigError(std::string("scenario: unknown key '") + item.key() +
                        "' in " + ctx);
    }
  }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(std::string("scenario: bad value for '") + key + "'");
  }
}

inline Vec3 get_vec3(const Json& j, const char* key, const Vec3& fallback) {
  if (!j.contains(key)) return fallback;
  const auto v = get_or<std::vector<double>>(j, key, {});
  if (v.size() != 3) {
    throw ConfigError(std::string("scenario: '") + key +
                      "' must have 3 entries");
  }
  return Vec3(v[0], v[1], v[2]);
}

inline Vec6 get_vec6(const Json& j, const char* key, const Vec6& fallback) {
  if (!j.contains(key)) return fallback;
  const auto v = get_or<std::vector<double>>(j, key, {});
  if (v.size() != 6) {
    throw ConfigError(std::string("scenario: '") + key +
                      "' must have 6 entries");
  }
  Vec6 out;
  for (int i = 0; i < 6; ++i) out[i] = v[i];
  return out;
}

}  // namespace detail

inline Scenario scenario_from_json(const Json& j) {
  using detail::check_keys;
  using detail::get_or;
  Scenario sc;
  check_keys(j, "scenario",
             {"name", "dt_s", "duration_s", "mass_kg", "inertia_diag_kgm2",
              "ee", "surface", "contact", "controller", "phases",
              "disturbance", "metrics", "conditions"});
  sc.name = get_or<std::string>(j, "name", sc.name);
  sc.dt = get_or(j, "dt_s", sc.dt);
  sc.duration = get_or(j, "duration_s", sc.duration);
  sc.inertia.mass = get_or(j, "mass_kg", sc.inertia.mass);
  sc.inertia.inertia =
      detail::get_vec3(j, "inertia_diag_kgm2", Vec3(0.03, 0.03, 0.05))
          .asDiagonal();

  if (j.contains("ee")) {
    const Json& e = j.at("ee");
    check_keys(e, "ee",
               {"d_r_m", "cc_offset_m"});
    sc.ee.d_r = get_or(e, "d_r_m", sc.ee.d_r);
    sc.ee.cc_offset = detail::get_vec3(e, "cc_offset_m", sc.ee.cc_offset);
  }
  if (j.contains("surface")) {
    const Json& s = j.at("surface");
    check_keys(s, "surface", {"tilt_deg", "tilt_axis_deg", "mu_s", "mu_k"});
    sc.surface.tilt_deg = get_or(s, "tilt_deg", sc.surface.tilt_deg);
    sc.surface.tilt_axis_deg =
        get_or(s, "tilt_axis_deg", sc.surface.tilt_axis_deg);
    sc.surface.mu_s = get_or(s, "mu_s", sc.surface.mu_s);
    sc.surface.mu_k = get_or(s, "mu_k", sc.surface.mu_k);
  }
  if (j.contains("contact")) {
    const Json& c = j.at("contact");
    check_keys(c, "contact",
               {"k_n_n_per_m", "c_n_ns_per_m", "v_eps_m_per_s",
                "pressure_threshold_n"});
    sc.contact.k_n = get_or(c, "k_n_n_per_m", sc.contact.k_n);
    sc.contact.c_n = get_or(c, "c_n_ns_per_m", sc.contact.c_n);
    sc.contact.v_eps = get_or(c, "v_eps_m_per_s", sc.contact.v_eps);
    sc.contact.pressure_threshold =
        get_or(c, "pressure_threshold_n", sc.contact.pressure_threshold);
  }
  if (j.contains("controller")) {
    const Json& c = j.at("controller");
    check_keys(c, "controller",
               {"d_v_diag", "k_p_diag", "force_kp", "force_ki", "f_ref_n",
                "integral_limit_ns", "estimator_gain_per_s"});
    sc.controller.d_v = detail::get_vec6(c, "d_v_diag", sc.controller.d_v);
    sc.controller.k_p = detail::get_vec6(c, "k_p_diag", sc.controller.k_p);
    sc.controller.force_kp = get_or(c, "force_kp", sc.controller.force_kp);
    sc.controller.force_ki = get_or(c, "force_ki", sc.controller.force_ki);
    sc.controller.f_ref = get_or(c, "f_ref_n", sc.controller.f_ref);
    sc.controller.integral_limit =
        get_or(c, "integral_limit_ns", sc.controller.integral_limit);
    sc.estimator_gain = get_or(c, "estimator_gain_per_s", sc.estimator_gain);
  }
  if (j.contains("phases")) {
    const Json& p = j.at("phases");
    check_keys(p, "phases",
               {"switch_time_s", "f_ref_ramp_n_per_s", "standoff_gap_m",
                "approach_start_gap_m"});
    sc.phases.switch_time = get_or(p, "switch_time_s", sc.phases.switch_time);
    sc.phases.f_ref_ramp =
        get_or(p, "f_ref_ramp_n_per_s", sc.phases.f_ref_ramp);
    sc.phases.standoff_gap =
        get_or(p, "standoff_gap_m", sc.phases.standoff_gap);
    sc.phases.approach_start_gap =
        get_or(p, "approach_start_gap_m", sc.phases.approach_start_gap);
  }
  if (j.contains("disturbance")) {
    const Json& d = j.at("disturbance");
    check_keys(d, "disturbance",
               {"type", "amplitude_nm", "seed", "hold_s", "freq_hz"});
    sc.disturbance.type = get_or<std::string>(d, "type", sc.disturbance.type);
    sc.disturbance.amplitude =
        get_or(d, "amplitude_nm", sc.disturbance.amplitude);
    sc.disturbance.seed =
        get_or<std::uint64_t>(d, "seed", sc.disturbance.seed);
    sc.disturbance.hold = get_or(d, "hold_s", sc.disturbance.hold);
    sc.disturbance.freq = get_or(d, "freq_hz", sc.disturbance.freq);
  }
  if (j.contains("metrics")) {
    const Json& m = j.at("metrics");
    check_keys(m, "metrics",
               {"steady_window_s", "d_cc_tol_m", "slip_debounce_s",
                "delta_floor_n", "impact_grace_s"});
    sc.metrics.steady_window =
        get_or(m, "steady_window_s", sc.metrics.steady_window);
    sc.metrics.d_cc_tol = get_or(m, "d_cc_tol_m", sc.metrics.d_cc_tol);
    sc.metrics.slip_debounce =
        get_or(m, "slip_debounce_s", sc.metrics.slip_debounce);
    sc.metrics.delta_floor = get_or(m, "delta_floor_n", sc.metrics.delta_floor);
    sc.metrics.impact_grace =
        get_or(m, "impact_grace_s", sc.metrics.impact_grace);
  }
  // Unless pinned explicitly, the design range |beta|_max matches the
  // scenario's initial tilt so reported margins refer to this very run.
  sc.conditions.beta_max = deg2rad(sc.surface.tilt_deg);
  if (j.contains("conditions")) {
    const Json& c = j.at("conditions");
    check_keys(c, "conditions",
               {"beta_max_deg", "eta", "tau_d_max_nm", "l_c_p_m"});
    sc.conditions.beta_max =
        deg2rad(get_or(c, "beta_max_deg", rad2deg(sc.conditions.beta_max)));
    sc.conditions.eta = get_or(c, "eta", sc.conditions.eta);
    sc.conditions.tau_d_max =
        get_or(c, "tau_d_max_nm", sc.conditions.tau_d_max);
    sc.conditions.l_c_p = get_or(c, "l_c_p_m", sc.conditions.l_c_p);
  }
  // Derived condition inputs follow the scenario unless overridden above.
  sc.conditions.mu_s = sc.surface.mu_s;
  sc.conditions.f_B_mag = sc.controller.f_ref;
  sc.conditions.d_r = sc.ee.d_r;
  sc.conditions.mass = sc.inertia.mass;
  sc.validate();
  return sc;
}

inline Json scenario_to_json(const Scenario& sc) {
  Json j;
  j["name"] = sc.name;
  j["dt_s"] = sc.dt;
  j["duration_s"] = sc.duration;
  j["mass_kg"] = sc.inertia.mass;
  j["inertia_diag_kgm2"] = {sc.inertia.inertia(0, 0), sc.inertia.inertia(1, 1),
                            sc.inertia.inertia(2, 2)};
  j["ee"] = {{"d_r_m", sc.ee.d_r},
             {"cc_offset_m",
              {sc.ee.cc_offset.x(), sc.ee.cc_offset.y(), sc.ee.cc_offset.z()}}};
  j["surface"] = {{"tilt_deg", sc.surface.tilt_deg},
                  {"tilt_axis_deg", sc.surface.tilt_axis_deg},
                  {"mu_s", sc.surface.mu_s},
                  {"mu_k", sc.surface.mu_k}};
  j["contact"] = {{"k_n_n_per_m", sc.contact.k_n},
                  {"c_n_ns_per_m", sc.contact.c_n},
                  {"v_eps_m_per_s", sc.contact.v_eps},
                  {"pressure_threshold_n", sc.contact.pressure_threshold}};
  j["controller"] = {
      {"d_v_diag", std::vector<double>(sc.controller.d_v.data(),
                                       sc.controller.d_v.data() + 6)},
      {"k_p_diag", std::vector<double>(sc.controller.k_p.data(),
                                       sc.controller.k_p.data() + 6)},
      {"force_kp", sc.controller.force_kp},
      {"force_ki", sc.controller.force_ki},
      {"f_ref_n", sc.controller.f_ref},
      {"integral_limit_ns", sc.controller.integral_limit},
      {"estimator_gain_per_s", sc.estimator_gain}};
  j["phases"] = {{"switch_time_s", sc.phases.switch_time},
                 {"f_ref_ramp_n_per_s", sc.phases.f_ref_ramp},
                 {"standoff_gap_m", sc.phases.standoff_gap},
                 {"approach_start_gap_m", sc.phases.approach_start_gap}};
  j["disturbance"] = {{"type", sc.disturbance.type},
                      {"amplitude_nm", sc.disturbance.amplitude},
                      {"seed", sc.disturbance.seed},
                      {"hold_s", sc.disturbance.hold},
                      {"freq_hz", sc.disturbance.freq}};
  j["metrics"] = {{"steady_window_s", sc.metrics.steady_window},
                  {"d_cc_tol_m", sc.metrics.d_cc_tol},
                  {"slip_debounce_s", sc.metrics.slip_debounce},
                  {"delta_floor_n", sc.metrics.delta_floor},
                  {"impact_grace_s", sc.metrics.impact_grace}};
  j["conditions"] = {{"beta_max_deg", rad2deg(sc.conditions.beta_max)},
                     {"eta", sc.conditions.eta},
                     {"tau_d_max_nm", sc.conditions.tau_d_max},
                     {"l_c_p_m", sc.conditions.l_c_p}};
  return j;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario: " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ConfigError("scenario json parse error: " + std::string(e.what()));
  }
  return scenario_from_json(j);
}

// FNV-1a over the canonical (sorted-key) dump; identifies a scenario in
// reports independent of file formatting.
inline std::string scenario_hash(const Scenario& sc) {
  const std::string dump = scenario_to_json(sc).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

inline Json condition_report_to_json(const ConditionReport& r) {
  return Json{{"condition1_satisfied", r.cond1_satisfied},
              {"condition1_margin", r.cond1_margin},
              {"min_mu_s", r.min_mu_s},
              {"mu_lim_at_beta_max", r.mu_lim_beta_max},
              {"condition2_satisfied", r.cond2_satisfied},
              {"condition2_margin_nm", r.cond2_margin},
              {"min_force_n", r.min_force},
              {"min_d_r_m", r.min_d_r}};
}

inline Json report_to_json(const Report& rep) {
  Json j;
  if (rep.has_conditions) {
    j["conditions"] = condition_report_to_json(rep.conditions);
  }
  j["steady_d_cc_m"] = rep.steady_d_cc;
  j["steady_beta_rad"] = rep.steady_beta;
  j["delta"] = rep.delta;
  j["max_mu"] = rep.max_mu;
  j["mu_threshold"] = rep.mu_threshold;
  j["slip"] = rep.slip;
  j["slip_any_sample"] = rep.slip_any_sample;
  j["max_slip_run_s"] = rep.max_slip_run_s;
  j["aligned"] = rep.aligned;
  j["settling_time_s"] = rep.settling_time_s;
  j["diverged"] = rep.diverged;
  return j;
}

}  // namespace passalign
