#include "parafault/commands.hpp"

#include <fstream>
#include <ostream>
#include <random>

#include "parafault/errors.hpp"
#include "parafault/io.hpp"
#include "parafault/rng.hpp"

namespace parafault {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

std::string config_hash(const nlohmann::json& canonical) {
  return hex64(fnv1a64(canonical.dump()));
}

nlohmann::json nullable(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json to_json(const ExcitationProfile& e) {
  return {{"freq_hz", e.freq_hz}, {"amp_c", e.amp_c}, {"dc_c", e.dc_c},
          {"duration_s", e.duration_s}, {"dt_s", e.dt_s}};
}

}  // namespace

SimulationOutput simulate_telemetry(const SimulateOptions& opt) {
  StringConfig config{opt.cells};
  config.validate();
  if (!(opt.initial_soc >= 0.0 && opt.initial_soc <= 1.0)) {
    throw ConfigError("simulate: initial_soc must lie in [0, 1]");
  }
  if (!(opt.v_noise_std >= 0.0 && opt.i_noise_std >= 0.0)) {
    throw ConfigError("simulate: noise std must be >= 0");
  }

  std::vector<double> currents;
  if (opt.excitation.duration_s != 0.0) {
    currents = generate_excitation(opt.excitation, config.capacity_ah());
  } else if (!(opt.excitation.dt_s > 0.0)) {
    throw ConfigError("excitation: dt_s must be > 0");
  }

  SimulationOutput out;
  out.trace = simulate_string(config, StringState::at_rest(config, opt.initial_soc), currents,
                              opt.excitation.dt_s);

  SplitMix64 rng(SplitMix64::mix(opt.seed));
  std::normal_distribution<double> unit(0.0, 1.0);
  out.telemetry.reserve(currents.size());
  for (std::size_t k = 0; k < currents.size(); ++k) {
    TelemetrySample s{out.trace.t_s[k], out.trace.i_total_a[k], out.trace.v_terminal_v[k]};
    if (opt.i_noise_std > 0.0) s.i_total_a += opt.i_noise_std * unit(rng);
    if (opt.v_noise_std > 0.0) s.v_terminal_v += opt.v_noise_std * unit(rng);
    out.telemetry.push_back(s);
  }

  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : opt.cells) cells.push_back(parafault::to_json(c));
  const auto rs = config.ohmic_resistances();
  nlohmann::json canonical = {{"cells", cells},
                              {"excitation", to_json(opt.excitation)},
                              {"initial_soc", opt.initial_soc},
                              {"v_noise_std", opt.v_noise_std},
                              {"i_noise_std", opt.i_noise_std},
                              {"seed", opt.seed}};
  out.truth = canonical;
  out.truth["schema_version"] = kSchemaVersion;
  out.truth["n_cells"] = config.size();
  out.truth["string_capacity_ah"] = config.capacity_ah();
  out.truth["theoretical_rs_ohm"] = parallel_resistance(rs);
  out.truth["soc_saturated"] = out.trace.saturated;
  out.truth["config_hash"] = config_hash(canonical);
  return out;
}

nlohmann::json cmd_simulate(const SimulateOptions& opt) {
  auto sim = simulate_telemetry(opt);
  {
    auto out = open_output(opt.telemetry_out);
    write_telemetry_csv(out, sim.telemetry);
  }
  if (opt.truth_out) write_json(*opt.truth_out, sim.truth);
  if (opt.trace_out) {
    auto out = open_output(*opt.trace_out);
    write_simulation_trace_csv(out, sim.trace);
  }
  return sim.truth;
}

nlohmann::json cmd_estimate(const EstimateOptions& opt) {
  const auto telemetry = load_telemetry_csv(opt.telemetry);
  const auto result = estimate_resistance(telemetry, opt.filter, opt.kalman, opt.trace_out.has_value());

  std::optional<double> truth;
  if (opt.truth) {
    std::ifstream in(*opt.truth);
    if (!in) throw ConfigError("cannot open " + opt.truth->string());
    try {
      nlohmann::json j;
      in >> j;
      truth = j.at("theoretical_rs_ohm").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(opt.truth->string() + ": " + e.what());
    }
  }

  nlohmann::json canonical = {{"filter", to_json(opt.filter)}, {"kalman", to_json(opt.kalman)}};
  nlohmann::json report = canonical;
  report["schema_version"] = kSchemaVersion;
  report["telemetry"] = opt.telemetry.string();
  report["n_samples"] = telemetry.size();
  report["rs_hat_ohm"] = result.final.rs_hat_ohm;
  report["p_var"] = result.final.p_var;
  report["n_updates"] = result.final.n_updates;
  report["n_rejected"] = result.final.n_rejected;
  report["converged"] = result.final.converged;
  report["convergence_time_s"] = nullable(result.convergence_time_s);
  report["truth_rs_ohm"] = nullable(truth);
  report["error_rel"] =
      truth ? nlohmann::json((result.final.rs_hat_ohm - *truth) / *truth) : nlohmann::json(nullptr);
  report["config_hash"] = config_hash(canonical);

  if (opt.report_out) write_json(*opt.report_out, report);
  if (opt.trace_out) {
    auto out = open_output(*opt.trace_out);
    write_estimate_trace_csv(out, result.trace);
  }
  return report;
}

nlohmann::json cmd_design(const DesignOptions& opt) {
  opt.population.validate();
  const auto dist = healthy_distribution(opt.population, opt.n_cells, opt.mc);
  auto thresholds = fit_and_thresholds(dist, opt.k_sigma, opt.method);
  thresholds.population = opt.population;
  thresholds.n_cells = opt.n_cells;
  const auto fa = false_alarm_rate(opt.population, opt.n_cells, thresholds, opt.mc);

  nlohmann::json canonical = {{"population", to_json(opt.population)},
                              {"n_cells", opt.n_cells},
                              {"k_sigma", opt.k_sigma},
                              {"method", to_string(opt.method)},
                              {"n_mc", opt.mc.n_mc},
                              {"seed", opt.mc.seed}};
  nlohmann::json report = canonical;
  report["schema_version"] = kSchemaVersion;
  report["fitted"] = {{"mu_s_ohm", dist.mu_s}, {"sigma_s_ohm", dist.sigma_s}, {"kappa_s", dist.kappa_s}};
  report["thresholds"] = to_json(thresholds);
  report["false_alarm"] = to_json(fa);
  report["config_hash"] = config_hash(canonical);

  if (opt.thresholds_out) write_json(*opt.thresholds_out, report);
  if (opt.histogram_out) {
    auto out = open_output(*opt.histogram_out);
    write_histogram_csv(out, freedman_diaconis_histogram(dist.samples));
  }
  return report;
}

nlohmann::json cmd_evaluate(const EvaluateOptions& opt) {
  opt.population.validate();
  if (opt.thresholds && opt.n_cells.size() != 1) {
    throw ConfigError("evaluate: fixed thresholds require exactly one string size");
  }
  if (opt.n_cells.empty() || opt.deltas.empty() || opt.modes.empty()) {
    throw ConfigError("evaluate: sizes, deltas and fault modes must be non-empty");
  }

  nlohmann::json modes = nlohmann::json::array();
  for (auto m : opt.modes) modes.push_back(to_string(m));
  nlohmann::json canonical = {{"population", to_json(opt.population)},
                              {"n_cells", opt.n_cells},
                              {"deltas", opt.deltas},
                              {"fault_modes", modes},
                              {"k_sigma", opt.k_sigma},
                              {"method", to_string(opt.method)},
                              {"fixed_thresholds", opt.thresholds ? to_json(*opt.thresholds) : nlohmann::json(nullptr)},
                              {"n_mc", opt.mc.n_mc},
                              {"seed", opt.mc.seed}};

  nlohmann::json rows = nlohmann::json::array();
  std::ofstream csv;
  if (opt.csv_out) {
    csv = open_output(*opt.csv_out);
    csv << "n_cells,delta_rel,fault_mode,lower_ohm,upper_ohm,false_alarm,false_alarm_se,"
           "missed_detection,missed_detection_se\n";
  }
  for (std::size_t n : opt.n_cells) {
    ThresholdSet thresholds;
    if (opt.thresholds) {
      thresholds = *opt.thresholds;
    } else {
      thresholds = fit_and_thresholds(healthy_distribution(opt.population, n, opt.mc), opt.k_sigma, opt.method);
      thresholds.population = opt.population;
      thresholds.n_cells = n;
    }
    const auto fa = false_alarm_rate(opt.population, n, thresholds, opt.mc);
    for (double delta : opt.deltas) {
      for (auto mode : opt.modes) {
        const FaultSpec fault{delta, 1, mode};
        const auto md = missed_detection_rate(opt.population, n, fault, thresholds, opt.mc);
        rows.push_back({{"n_cells", n},
                        {"delta_rel", delta},
                        {"fault_mode", to_string(mode)},
                        {"lower_ohm", thresholds.lower_ohm},
                        {"upper_ohm", thresholds.upper_ohm},
                        {"false_alarm", to_json(fa)},
                        {"missed_detection", to_json(md)}});
        if (csv.is_open()) {
          csv << n << ',' << format_double(delta) << ',' << to_string(mode) << ','
              << format_double(thresholds.lower_ohm) << ',' << format_double(thresholds.upper_ohm)
              << ',' << format_double(fa.rate) << ',' << format_double(fa.std_error) << ','
              << format_double(md.rate) << ',' << format_double(md.std_error) << '\n';
        }
      }
    }
  }

  nlohmann::json report = canonical;
  report["schema_version"] = kSchemaVersion;
  report["rows"] = rows;
  report["config_hash"] = config_hash(canonical);
  if (opt.report_out) write_json(*opt.report_out, report);
  return report;
}

int cmd_diagnose(const DiagnoseOptions& opt, std::ostream& out) {
  const auto telemetry = load_telemetry_csv(opt.telemetry);
  const auto thresholds = load_thresholds(opt.thresholds);
  const auto verdicts = run_online(telemetry, opt.filter, opt.kalman, thresholds, opt.diagnosis);
  for (const auto& v : verdicts) out << to_json(v).dump() << '\n';
  return worst_verdict_exit_code(verdicts);
}

}  // namespace parafault
