// parafault: simulate | estimate | design | evaluate | diagnose

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "parafault/commands.hpp"
#include "parafault/errors.hpp"
#include "parafault/io.hpp"

using namespace parafault;

namespace {

void add_filter_options(CLI::App* cmd, FilterConfig& f) {
  cmd->add_option("--cutoff-hz", f.cutoff_hz, "High-pass 3 dB frequency")->capture_default_str();
  cmd->add_option("--order", f.order, "Butterworth order")->capture_default_str();
  cmd->add_option("--sample-hz", f.sample_hz, "Telemetry sample rate")->capture_default_str();
}

void add_kalman_options(CLI::App* cmd, KalmanConfig& k) {
  cmd->add_option("--rs0-ohm", k.rs0_ohm, "Initial resistance estimate")->capture_default_str();
  cmd->add_option("--p0-var", k.p0_var, "Initial error variance [Ohm^2]")->capture_default_str();
  cmd->add_option("--q-process", k.q_process, "Random-walk variance per step [Ohm^2]")->capture_default_str();
  cmd->add_option("--r-meas", k.r_meas, "Measurement noise variance [V^2]")->capture_default_str();
  cmd->add_option("--i-min-a", k.i_min_a, "Minimum |filtered current| for an update")->capture_default_str();
  cmd->add_option("--conv-window-s", k.conv_window_s)->capture_default_str();
  cmd->add_option("--conv-tol-rel", k.conv_tol_rel)->capture_default_str();
  cmd->add_option("--warmup-s", k.warmup_s, "Filtered output discarded at start")->capture_default_str();
}

struct PopulationArgs {
  std::string name{"fresh"};
  double mu_mohm{0.0};
  double sigma_mohm{0.0};
};

void add_population_options(CLI::App* cmd, PopulationArgs& p) {
  cmd->add_option("--population", p.name, "fresh | aged | custom")->capture_default_str();
  cmd->add_option("--mu-mohm", p.mu_mohm, "Custom population mean [mOhm]");
  cmd->add_option("--sigma-mohm", p.sigma_mohm, "Custom population std [mOhm]");
}

CellPopulation resolve_population(const PopulationArgs& p) {
  if (p.name == "custom") return {p.mu_mohm * 1e-3, p.sigma_mohm * 1e-3, "custom"};
  return CellPopulation::by_name(p.name);
}

void add_mc_options(CLI::App* cmd, MonteCarloSpec& mc) {
  cmd->add_option("--n-mc", mc.n_mc, "Monte Carlo samples")->capture_default_str();
  cmd->add_option("--seed", mc.seed)->capture_default_str();
  cmd->add_option("--workers", mc.workers, "Sampling threads (results do not depend on it)")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fault detection for parallel-connected battery strings"};
  app.set_config("--config", "", "Flat key = value file with option values");
  app.require_subcommand(1);

  // simulate
  SimulateOptions sim;
  std::string cells_file;
  std::vector<std::size_t> pick;
  std::vector<double> rs_mohm;
  double fault_delta = 0.0;
  std::string telemetry_out = "telemetry.csv";
  std::string truth_out;
  std::string trace_out;
  auto* simulate = app.add_subcommand("simulate", "Simulate a parallel string and write telemetry");
  simulate->add_option("--cells", cells_file, "Cell parameter file (cell.<k>.<field> = value)");
  simulate->add_option("--pick", pick, "1-based cell indices from --cells (default: all)")->delimiter(',');
  simulate->add_option("--rs-mohm", rs_mohm, "Ohmic resistances [mOhm] for default cells")->delimiter(',');
  simulate->add_option("--fault-delta", fault_delta, "Relative Rs increase applied to the first cell");
  simulate->add_option("--freq-hz", sim.excitation.freq_hz)->capture_default_str();
  simulate->add_option("--amp-c", sim.excitation.amp_c)->capture_default_str();
  simulate->add_option("--dc-c", sim.excitation.dc_c)->capture_default_str();
  simulate->add_option("--duration-s", sim.excitation.duration_s)->capture_default_str();
  simulate->add_option("--dt-s", sim.excitation.dt_s)->capture_default_str();
  simulate->add_option("--initial-soc", sim.initial_soc)->capture_default_str();
  simulate->add_option("--v-noise-std", sim.v_noise_std)->capture_default_str();
  simulate->add_option("--i-noise-std", sim.i_noise_std)->capture_default_str();
  simulate->add_option("--seed", sim.seed)->capture_default_str();
  simulate->add_option("--out", telemetry_out, "Telemetry CSV")->capture_default_str();
  simulate->add_option("--truth", truth_out, "Truth sidecar JSON");
  simulate->add_option("--trace", trace_out, "Full per-cell trace CSV");

  // estimate
  EstimateOptions est;
  std::string est_telemetry, est_truth, est_report, est_trace;
  auto* estimate = app.add_subcommand("estimate", "Estimate string resistance from telemetry");
  estimate->add_option("--telemetry", est_telemetry)->required();
  estimate->add_option("--truth", est_truth, "Truth sidecar from simulate");
  estimate->add_option("--out", est_report, "Report JSON (default: stdout)");
  estimate->add_option("--trace", est_trace, "Estimator trace CSV");
  add_filter_options(estimate, est.filter);
  add_kalman_options(estimate, est.kalman);

  // design
  DesignOptions des;
  PopulationArgs des_pop;
  std::string des_method = "normal", des_out, des_hist;
  auto* design = app.add_subcommand("design", "Design detection thresholds by Monte Carlo");
  add_population_options(design, des_pop);
  design->add_option("--n-cells", des.n_cells)->capture_default_str();
  design->add_option("--k-sigma", des.k_sigma)->capture_default_str();
  design->add_option("--method", des_method, "normal | empirical_quantile")->capture_default_str();
  add_mc_options(design, des.mc);
  design->add_option("--out", des_out, "Threshold JSON (default: stdout)");
  design->add_option("--hist", des_hist, "Histogram CSV");

  // evaluate
  EvaluateOptions eva;
  PopulationArgs eva_pop;
  std::vector<std::string> eva_modes{"scale_sampled", "scale_mean"};
  std::string eva_method = "normal", eva_thresholds, eva_out, eva_csv;
  auto* evaluate = app.add_subcommand("evaluate", "False-alarm and missed-detection rates");
  add_population_options(evaluate, eva_pop);
  evaluate->add_option("--n-cells", eva.n_cells, "String sizes")->delimiter(',')->capture_default_str();
  evaluate->add_option("--delta", eva.deltas, "Faulty-cell relative Rs increase")->delimiter(',')->capture_default_str();
  evaluate->add_option("--fault-mode", eva_modes, "scale_sampled | scale_mean")->delimiter(',')->capture_default_str();
  evaluate->add_option("--k-sigma", eva.k_sigma)->capture_default_str();
  evaluate->add_option("--method", eva_method)->capture_default_str();
  evaluate->add_option("--thresholds", eva_thresholds, "Use fixed thresholds from design output");
  add_mc_options(evaluate, eva.mc);
  evaluate->add_option("--out", eva_out, "Report JSON (default: stdout)");
  evaluate->add_option("--csv", eva_csv, "Rate table CSV");

  // diagnose
  DiagnoseOptions dia;
  std::string dia_telemetry, dia_thresholds, dia_out;
  auto* diagnose = app.add_subcommand("diagnose", "Online fault verdicts; exit 0 normal, 2 fault, 3 indeterminate");
  diagnose->add_option("--telemetry", dia_telemetry)->required();
  diagnose->add_option("--thresholds", dia_thresholds)->required();
  diagnose->add_option("--persistence", dia.diagnosis.persistence)->capture_default_str();
  diagnose->add_option("--out", dia_out, "Verdict JSON-lines (default: stdout)");
  add_filter_options(diagnose, dia.filter);
  add_kalman_options(diagnose, dia.kalman);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      if (!cells_file.empty()) {
        const auto all = load_cells(cells_file);
        if (pick.empty()) {
          sim.cells = all;
        } else {
          for (auto k : pick) {
            if (k < 1 || k > all.size()) throw ConfigError("--pick index out of range");
            sim.cells.push_back(all[k - 1]);
          }
        }
      }
      for (double r : rs_mohm) {
        CellParams p;
        p.rs_ohm = r * 1e-3;
        sim.cells.push_back(p);
      }
      if (sim.cells.empty()) throw ConfigError("simulate: give --cells and/or --rs-mohm");
      sim.cells.front().rs_ohm *= 1.0 + fault_delta;
      sim.telemetry_out = telemetry_out;
      if (!truth_out.empty()) sim.truth_out = truth_out;
      if (!trace_out.empty()) sim.trace_out = trace_out;
      const auto truth = cmd_simulate(sim);
      if (truth_out.empty()) std::cout << truth.dump(2) << '\n';
      return 0;
    }
    if (*estimate) {
      est.telemetry = est_telemetry;
      if (!est_truth.empty()) est.truth = est_truth;
      if (!est_report.empty()) est.report_out = est_report;
      if (!est_trace.empty()) est.trace_out = est_trace;
      const auto report = cmd_estimate(est);
      if (est_report.empty()) std::cout << report.dump(2) << '\n';
      return 0;
    }
    if (*design) {
      des.population = resolve_population(des_pop);
      des.method = threshold_method_from_string(des_method);
      if (!des_out.empty()) des.thresholds_out = des_out;
      if (!des_hist.empty()) des.histogram_out = des_hist;
      const auto report = cmd_design(des);
      if (des_out.empty()) std::cout << report.dump(2) << '\n';
      return 0;
    }
    if (*evaluate) {
      eva.population = resolve_population(eva_pop);
      eva.method = threshold_method_from_string(eva_method);
      eva.modes.clear();
      for (const auto& m : eva_modes) eva.modes.push_back(fault_mode_from_string(m));
      if (!eva_thresholds.empty()) {
        eva.thresholds = load_thresholds(eva_thresholds);
        // Unless overridden, evaluate against the population and size the thresholds were designed for.
        if (evaluate->count("--population") == 0 && eva.thresholds->population.mu_ohm > 0.0 &&
            eva.thresholds->n_cells > 0) {
          eva.population = eva.thresholds->population;
        }
        if (evaluate->count("--n-cells") == 0 && eva.thresholds->n_cells > 0) {
          eva.n_cells = {eva.thresholds->n_cells};
        }
      }
      if (!eva_out.empty()) eva.report_out = eva_out;
      if (!eva_csv.empty()) eva.csv_out = eva_csv;
      const auto report = cmd_evaluate(eva);
      if (eva_out.empty()) std::cout << report.dump(2) << '\n';
      return 0;
    }
    if (*diagnose) {
      dia.telemetry = dia_telemetry;
      dia.thresholds = dia_thresholds;
      if (dia_out.empty()) return cmd_diagnose(dia, std::cout);
      std::ofstream out(dia_out);
      if (!out) throw ConfigError("cannot write " + dia_out);
      return cmd_diagnose(dia, out);
    }
  } catch (const std::exception& e) {
    std::cerr << "parafault: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
