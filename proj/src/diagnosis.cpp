#include "parafault/diagnosis.hpp"

#include <cmath>

#include "parafault/errors.hpp"

namespace parafault {

std::string to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::Normal: return "Normal";
    case VerdictStatus::DegradationFault: return "DegradationFault";
    case VerdictStatus::LowResistanceFault: return "LowResistanceFault";
    case VerdictStatus::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

VerdictStatus classify(double rs_hat_ohm, const ThresholdSet& thresholds) noexcept {
  if (!std::isfinite(rs_hat_ohm)) return VerdictStatus::Indeterminate;
  if (rs_hat_ohm > thresholds.upper_ohm) return VerdictStatus::DegradationFault;
  if (rs_hat_ohm < thresholds.lower_ohm) return VerdictStatus::LowResistanceFault;
  return VerdictStatus::Normal;
}

DiagnosisEngine::DiagnosisEngine(ThresholdSet thresholds, DiagnosisConfig cfg)
    : thresholds_(thresholds), cfg_(cfg) {
  if (cfg_.persistence == 0) throw ConfigError("diagnosis: persistence must be >= 1");
  if (!(cfg_.verdict_period_s > 0.0)) throw ConfigError("diagnosis: verdict period must be > 0");
  if (!(thresholds_.lower_ohm <= thresholds_.upper_ohm)) {
    throw ConfigError("diagnosis: lower threshold above upper threshold");
  }
}

void DiagnosisEngine::reset() noexcept {
  pending_ = VerdictStatus::Normal;
  latched_ = VerdictStatus::Normal;
  consecutive_ = 0;
}

Verdict DiagnosisEngine::assess(double t_s, const ResistanceEstimate& estimate) {
  Verdict v;
  v.t_s = t_s;
  v.rs_hat_ohm = estimate.rs_hat_ohm;
  v.lower_ohm = thresholds_.lower_ohm;
  v.upper_ohm = thresholds_.upper_ohm;

  if (latched()) {
    v.status = latched_;
    v.consecutive = consecutive_;
    return v;
  }
  const VerdictStatus raw =
      estimate.converged ? classify(estimate.rs_hat_ohm, thresholds_) : VerdictStatus::Indeterminate;
  if (raw == VerdictStatus::Indeterminate || raw == VerdictStatus::Normal) {
    consecutive_ = 0;
    pending_ = VerdictStatus::Normal;
    v.status = raw;
    return v;
  }
  consecutive_ = raw == pending_ ? consecutive_ + 1 : 1;
  pending_ = raw;
  v.consecutive = consecutive_;
  if (consecutive_ >= cfg_.persistence) {
    latched_ = raw;
    v.status = raw;
  } else {
    v.status = VerdictStatus::Normal;
  }
  return v;
}

std::vector<Verdict> run_online(std::span<const TelemetrySample> telemetry,
                                const FilterConfig& filter, const KalmanConfig& kalman,
                                const ThresholdSet& thresholds, const DiagnosisConfig& cfg) {
  validate_telemetry(telemetry, filter.sample_hz);
  const auto period = static_cast<std::size_t>(std::llround(cfg.verdict_period_s * filter.sample_hz));
  if (period == 0) throw ConfigError("diagnosis: verdict period shorter than one sample");

  ResistancePipeline pipeline(filter, kalman);
  DiagnosisEngine engine(thresholds, cfg);
  std::vector<Verdict> verdicts;
  for (std::size_t k = 0; k < telemetry.size(); ++k) {
    pipeline.push(telemetry[k]);
    if (k > 0 && k % period == 0) {
      verdicts.push_back(engine.assess(telemetry[k].t_s, pipeline.estimator().estimate()));
    }
  }
  return verdicts;
}

int worst_verdict_exit_code(std::span<const Verdict> verdicts) noexcept {
  bool normal = false;
  for (const auto& v : verdicts) {
    if (v.status == VerdictStatus::DegradationFault || v.status == VerdictStatus::LowResistanceFault) {
      return 2;
    }
    normal = normal || v.status == VerdictStatus::Normal;
  }
  return normal ? 0 : 3;
}

}  // namespace parafault
