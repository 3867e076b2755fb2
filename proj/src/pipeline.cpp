#include "parafault/pipeline.hpp"

#include <cmath>

#include "parafault/errors.hpp"

namespace parafault {

void validate_telemetry(std::span<const TelemetrySample> telemetry, double sample_hz) {
  const double dt = 1.0 / sample_hz;
  for (std::size_t k = 0; k < telemetry.size(); ++k) {
    const auto& s = telemetry[k];
    if (!std::isfinite(s.t_s) || !std::isfinite(s.i_total_a) || !std::isfinite(s.v_terminal_v)) {
      throw StreamError(k, "non-finite value");
    }
    if (k == 0) continue;
    const double step = s.t_s - telemetry[k - 1].t_s;
    if (!(step > 0.0)) throw StreamError(k, "timestamps not strictly increasing");
    if (std::abs(step - dt) > 1e-6) {
      throw StreamError(k, "sample spacing " + std::to_string(step) + " s does not match " +
                               std::to_string(dt) + " s");
    }
  }
}

ResistancePipeline::ResistancePipeline(const FilterConfig& filter, const KalmanConfig& kalman)
    : v_filter_(design_highpass(filter.cutoff_hz, filter.sample_hz, filter.order)),
      i_filter_(v_filter_),
      estimator_(kalman, filter.sample_hz) {}

ResistancePipeline::Step ResistancePipeline::push(const TelemetrySample& sample) {
  if (!primed_) {
    v_filter_.prime(sample.v_terminal_v);
    i_filter_.prime(sample.i_total_a);
    primed_ = true;
  }
  Step out;
  out.v_f = v_filter_.process(sample.v_terminal_v);
  out.i_f = i_filter_.process(sample.i_total_a);
  out.accepted = estimator_.step(out.v_f, out.i_f);
  return out;
}

EstimateResult estimate_resistance(std::span<const TelemetrySample> telemetry,
                                   const FilterConfig& filter, const KalmanConfig& kalman,
                                   bool keep_trace) {
  validate_telemetry(telemetry, filter.sample_hz);
  ResistancePipeline pipeline(filter, kalman);
  EstimateResult result;
  if (keep_trace) result.trace.reserve(telemetry.size());
  for (const auto& s : telemetry) {
    const auto step = pipeline.push(s);
    if (keep_trace) {
      const auto& e = pipeline.estimator().estimate();
      result.trace.push_back({s.t_s, step.v_f, step.i_f, e.rs_hat_ohm, e.p_var, step.accepted});
    }
  }
  result.final = pipeline.estimator().estimate();
  if (auto t = pipeline.estimator().convergence_time_s()) {
    // estimator time starts at zero; report on the telemetry clock
    result.convergence_time_s = *t + (telemetry.empty() ? 0.0 : telemetry.front().t_s);
  }
  return result;
}

}  // namespace parafault
