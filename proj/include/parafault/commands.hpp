#pragma once

// Scenario-level workflows behind the command-line front end. Each returns the
// JSON document it wrote so callers and tests can inspect it directly.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "parafault/diagnosis.hpp"
#include "parafault/estimator.hpp"
#include "parafault/pipeline.hpp"
#include "parafault/signals.hpp"
#include "parafault/stats.hpp"
#include "parafault/string_model.hpp"

namespace parafault {

struct SimulateOptions {
  std::vector<CellParams> cells;
  ExcitationProfile excitation;
  double initial_soc{1.0};
  double v_noise_std{0.0};  ///< additive Gaussian noise on the voltage sensor [V]
  double i_noise_std{0.0};  ///< additive Gaussian noise on the current sensor [A]
  std::uint64_t seed{1};
  std::filesystem::path telemetry_out;
  std::optional<std::filesystem::path> truth_out;
  std::optional<std::filesystem::path> trace_out;
};

/// Simulated sensor readings plus the theoretical string resistance.
struct SimulationOutput {
  std::vector<TelemetrySample> telemetry;
  SimulationTrace trace;
  nlohmann::json truth;
};

/// In-memory simulation; zero duration yields empty telemetry.
SimulationOutput simulate_telemetry(const SimulateOptions& opt);
nlohmann::json cmd_simulate(const SimulateOptions& opt);

struct EstimateOptions {
  std::filesystem::path telemetry;
  std::optional<std::filesystem::path> truth;
  FilterConfig filter;
  KalmanConfig kalman;
  std::optional<std::filesystem::path> report_out;
  std::optional<std::filesystem::path> trace_out;
};

nlohmann::json cmd_estimate(const EstimateOptions& opt);

struct DesignOptions {
  CellPopulation population;
  std::size_t n_cells{5};
  double k_sigma{2.0};
  ThresholdMethod method{ThresholdMethod::Normal};
  MonteCarloSpec mc;
  std::optional<std::filesystem::path> thresholds_out;
  std::optional<std::filesystem::path> histogram_out;
};

nlohmann::json cmd_design(const DesignOptions& opt);

struct EvaluateOptions {
  CellPopulation population;
  std::vector<std::size_t> n_cells{10};
  std::vector<double> deltas{0.6, 1.0};
  std::vector<FaultMode> modes{FaultMode::ScaleSampled, FaultMode::ScaleMean};
  double k_sigma{2.0};
  ThresholdMethod method{ThresholdMethod::Normal};
  /// Fixed thresholds; only valid with a single string size.
  std::optional<ThresholdSet> thresholds;
  MonteCarloSpec mc;
  std::optional<std::filesystem::path> report_out;
  std::optional<std::filesystem::path> csv_out;
};

nlohmann::json cmd_evaluate(const EvaluateOptions& opt);

struct DiagnoseOptions {
  std::filesystem::path telemetry;
  std::filesystem::path thresholds;
  FilterConfig filter;
  KalmanConfig kalman;
  DiagnosisConfig diagnosis;
};

/// Streams verdicts as JSON lines to out; returns the worst-verdict exit code.
int cmd_diagnose(const DiagnoseOptions& opt, std::ostream& out);

}  // namespace parafault
