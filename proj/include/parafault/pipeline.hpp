#pragma once

#include <optional>
#include <span>
#include <vector>

#include "parafault/estimator.hpp"
#include "parafault/signals.hpp"

namespace parafault {

/// One reading of the string's current and voltage sensors.
struct TelemetrySample {
  double t_s{0.0};
  double i_total_a{0.0};     ///< discharge positive
  double v_terminal_v{0.0};
};

struct FilterConfig {
  double cutoff_hz{0.05};
  int order{2};
  double sample_hz{10.0};
};

/// Throws StreamError at the first sample whose spacing from its predecessor
/// differs from 1/sample_hz by more than 1e-6 s, or whose values are non-finite.
void validate_telemetry(std::span<const TelemetrySample> telemetry, double sample_hz);

/// High-pass both sensor channels with separate filter instances and feed the
/// filtered pair to the resistance estimator. Both filters are primed with the
/// first sample so the initial voltage level does not ring through.
class ResistancePipeline {
public:
  ResistancePipeline(const FilterConfig& filter, const KalmanConfig& kalman);

  struct Step {
    double v_f{0.0};
    double i_f{0.0};
    bool accepted{false};
  };

  Step push(const TelemetrySample& sample);

  const ResistanceEstimator& estimator() const noexcept { return estimator_; }
  const HighPassFilter& voltage_filter() const noexcept { return v_filter_; }

private:
  HighPassFilter v_filter_;
  HighPassFilter i_filter_;
  ResistanceEstimator estimator_;
  bool primed_{false};
};

struct EstimateTraceRow {
  double t_s;
  double v_f;
  double i_f;
  double rs_hat_ohm;
  double p_var;
  bool accepted;
};

struct EstimateResult {
  ResistanceEstimate final;
  std::optional<double> convergence_time_s;
  std::vector<EstimateTraceRow> trace;
};

/// Run the whole series through a fresh pipeline.
EstimateResult estimate_resistance(std::span<const TelemetrySample> telemetry,
                                   const FilterConfig& filter, const KalmanConfig& kalman,
                                   bool keep_trace = false);

}  // namespace parafault
