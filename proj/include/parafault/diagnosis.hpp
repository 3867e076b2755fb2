#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "parafault/pipeline.hpp"
#include "parafault/stats.hpp"

namespace parafault {

enum class VerdictStatus { Normal, DegradationFault, LowResistanceFault, Indeterminate };

std::string to_string(VerdictStatus status);

struct Verdict {
  VerdictStatus status{VerdictStatus::Indeterminate};
  double rs_hat_ohm{0.0};
  double lower_ohm{0.0};
  double upper_ohm{0.0};
  std::size_t consecutive{0};  ///< consecutive out-of-band classifications so far
  double t_s{0.0};
};

/// Above upper -> DegradationFault, below lower -> LowResistanceFault,
/// inside the closed band -> Normal, non-finite -> Indeterminate.
VerdictStatus classify(double rs_hat_ohm, const ThresholdSet& thresholds) noexcept;

struct DiagnosisConfig {
  std::size_t persistence{10};   ///< consecutive out-of-band verdicts before a fault latches
  double verdict_period_s{1.0};
};

/// Debounced, latching decision logic over successive resistance estimates.
class DiagnosisEngine {
public:
  DiagnosisEngine(ThresholdSet thresholds, DiagnosisConfig cfg);

  Verdict assess(double t_s, const ResistanceEstimate& estimate);
  /// Clear a latched fault and the persistence counter.
  void reset() noexcept;
  bool latched() const noexcept { return latched_ != VerdictStatus::Normal; }

private:
  ThresholdSet thresholds_;
  DiagnosisConfig cfg_;
  VerdictStatus pending_{VerdictStatus::Normal};
  VerdictStatus latched_{VerdictStatus::Normal};
  std::size_t consecutive_{0};
};

/// Filter, estimate and classify a telemetry stream, one verdict per
/// verdict_period_s of telemetry.
std::vector<Verdict> run_online(std::span<const TelemetrySample> telemetry,
                                const FilterConfig& filter, const KalmanConfig& kalman,
                                const ThresholdSet& thresholds, const DiagnosisConfig& cfg = {});

/// 2 if any fault verdict, else 0 if any Normal, else 3.
int worst_verdict_exit_code(std::span<const Verdict> verdicts) noexcept;

}  // namespace parafault
