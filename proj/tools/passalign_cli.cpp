// Command-line front end: closed-form design guideline, single scenario
// simulation, parameter sweeps, and trace re-analysis.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "passalign/conditions.hpp"
#include "passalign/scenario.hpp"
#include "passalign/simulate.hpp"
#include "passalign/trace_io.hpp"

namespace {

double round_to(double v, double quantum) {
  return std::round(v / quantum) * quantum;
}

passalign::Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw passalign::ConfigError("cannot open scenario: " + path);
  }
  passalign::Json j;
  try {
    in >> j;
  } catch (const passalign::Json::exception& e) {
    throw passalign::ConfigError("scenario json parse error: " +
                                 std::string(e.what()));
  }
  return j;
}

void apply_overrides(passalign::Json& j, bool has_seed, std::uint64_t seed,
                     bool has_dt, double dt) {
  if (has_seed) j["disturbance"]["seed"] = seed;
  if (has_dt) j["dt_s"] = dt;
}

int cmd_guideline(const passalign::ConditionInputs& inputs) {
  const passalign::ConditionReport rep =
      passalign::build_condition_report(inputs);
  passalign::Json j = passalign::condition_report_to_json(rep);
  j["inputs"] = {{"beta_max_deg", passalign::rad2deg(inputs.beta_max)},
                 {"mu_s", inputs.mu_s},
                 {"eta", inputs.eta},
                 {"f_b_n", inputs.f_B_mag},
                 {"d_r_m", inputs.d_r},
                 {"tau_d_max_nm", inputs.tau_d_max}};
  j["rounded"] = {{"mu_lim_at_beta_max", round_to(rep.mu_lim_beta_max, 0.1)},
                  {"min_mu_s", round_to(rep.min_mu_s, 0.01)},
                  {"min_force_n", round_to(rep.min_force, 0.1)},
                  {"min_d_r_m", round_to(rep.min_d_r, 1e-4)}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Simulation and analysis toolkit for passive tool alignment on flat "
      "surfaces"};
  app.require_subcommand(1);

  // guideline
  auto* guideline = app.add_subcommand(
      "guideline",
      "Evaluate the closed-form alignment conditions for a design point");
  double beta_max_deg = 6.0;
  passalign::ConditionInputs inputs;
  guideline->add_option("--beta-max-deg", beta_max_deg,
                        "Largest expected misalignment angle, deg");
  guideline->add_option("--mu-s", inputs.mu_s,
                        "Static friction coefficient of the pairing");
  guideline->add_option("--eta", inputs.eta, "Safety factor in (0,1]");
  guideline->add_option("--force-n", inputs.f_B_mag,
                        "Driving force magnitude, N");
  guideline->add_option("--d-r-m", inputs.d_r, "Foot circle radius, m");
  guideline->add_option("--tau-d-max-nm", inputs.tau_d_max,
                        "Disturbance torque bound, N m");
  guideline->add_option("--mass-kg", inputs.mass, "Vehicle mass, kg");
  guideline->add_option("--l-c-p-m", inputs.l_c_p,
                        "In-plane CoM lever length, m");

  // shared run flags
  std::string scenario_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  double dt_override = 0.0;

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "Run one scenario; writes trace CSV and report JSON");
  simulate->add_option("scenario", scenario_path, "Scenario JSON file")
      ->required();
  auto* sim_seed =
      simulate->add_option("--seed", seed, "Disturbance seed override");
  simulate->add_option("--out-dir", out_dir, "Output directory");
  auto* sim_dt =
      simulate->add_option("--dt", dt_override, "Time step override, s");

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "Run a scenario once per value of one parameter axis");
  std::string axis;
  std::vector<double> values;
  sweep->add_option("scenario", scenario_path, "Scenario JSON file")
      ->required();
  sweep->add_option("--axis", axis,
                    "Parameter axis: f_ref | mu_s | beta0 | tau_d | d_r")
      ->required();
  sweep->add_option("--values", values, "Sweep values (comma separated)")
      ->delimiter(',')
      ->required();
  auto* sweep_seed =
      sweep->add_option("--seed", seed, "Disturbance seed override");
  sweep->add_option("--out-dir", out_dir, "Output directory");
  auto* sweep_dt =
      sweep->add_option("--dt", dt_override, "Time step override, s");

  // report
  auto* report = app.add_subcommand(
      "report", "Recompute the summary metrics from an existing trace CSV");
  std::string trace_path;
  passalign::MetricsParams metrics;
  report->add_option("trace", trace_path, "Trace CSV file")->required();
  report->add_option("--steady-window-s", metrics.steady_window,
                     "Steady-state window at the trace end, s");
  report->add_option("--d-cc-tol-m", metrics.d_cc_tol,
                     "Alignment tolerance on d_CC, m");
  report->add_option("--slip-debounce-s", metrics.slip_debounce,
                     "Minimum slip-run length counted as a slip event, s");
  report->add_option("--delta-floor-n", metrics.delta_floor,
                     "Force floor for delta samples, N");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*guideline) {
      inputs.beta_max = passalign::deg2rad(beta_max_deg);
      return cmd_guideline(inputs);
    }
    if (*simulate) {
      passalign::Json j = load_json(scenario_path);
      apply_overrides(j, !sim_seed->empty(), seed, !sim_dt->empty(),
                      dt_override);
      const passalign::Scenario sc = passalign::scenario_from_json(j);
      const passalign::RunArtifacts art = passalign::run_scenario(sc, out_dir);
      std::cout << "trace:  " << art.trace_csv.string() << "\n"
                << "report: " << art.report_json.string() << "\n"
                << "aligned=" << (art.report.aligned ? "true" : "false")
                << " slip=" << (art.report.slip ? "true" : "false")
                << " steady_d_cc_m=" << art.report.steady_d_cc
                << " delta=" << art.report.delta
                << " diverged=" << (art.diverged ? "true" : "false") << "\n";
      return art.diverged ? 2 : 0;
    }
    if (*sweep) {
      passalign::Json j = load_json(scenario_path);
      apply_overrides(j, !sweep_seed->empty(), seed, !sweep_dt->empty(),
                      dt_override);
      const passalign::SweepResult res =
          passalign::run_sweep(j, axis, values, out_dir);
      std::cout << "aggregate: " << res.aggregate_csv.string() << " ("
                << res.runs.size() << " runs)\n";
      return 0;
    }
    if (*report) {
      const passalign::Trace trace = passalign::read_trace_csv(trace_path);
      const passalign::Report rep = passalign::summarize(trace, metrics);
      std::cout << passalign::report_to_json(rep).dump(2) << "\n";
      return 0;
    }
  } catch (const passalign::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
