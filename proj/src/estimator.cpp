#include "parafault/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "parafault/errors.hpp"

namespace parafault {

void KalmanConfig::validate() const {
  if (!(p0_var > 0.0 && q_process >= 0.0 && r_meas > 0.0)) {
    throw ConfigError("kalman: p0_var and r_meas must be > 0, q_process >= 0");
  }
  if (!(i_min_a > 0.0)) throw ConfigError("kalman: i_min_a must be > 0");
  if (!(conv_window_s > 0.0 && conv_tol_rel > 0.0)) {
    throw ConfigError("kalman: convergence window and tolerance must be > 0");
  }
  if (!(warmup_s >= 0.0)) throw ConfigError("kalman: warmup_s must be >= 0");
  if (!std::isfinite(rs0_ohm)) throw ConfigError("kalman: rs0_ohm must be finite");
}

ResistanceEstimate ResistanceEstimate::initial(const KalmanConfig& cfg) {
  ResistanceEstimate e;
  e.rs_hat_ohm = cfg.rs0_ohm;
  e.p_var = cfg.p0_var;
  e.warmup_remaining_s = cfg.warmup_s;
  return e;
}

ResistanceEstimate kf_update(const ResistanceEstimate& est, const KalmanConfig& cfg, double v_f,
                             double i_f) {
  ResistanceEstimate next = est;
  next.p_var = est.p_var + cfg.q_process;
  if (!std::isfinite(v_f) || !std::isfinite(i_f)) {
    ++next.n_rejected;
    return next;
  }
  if (std::abs(i_f) < cfg.i_min_a) return next;

  const double h = -i_f;
  const double innovation = v_f - h * next.rs_hat_ohm;
  const double s = h * h * next.p_var + cfg.r_meas;
  const double gain = next.p_var * h / s;
  next.rs_hat_ohm += gain * innovation;
  // (1 - K H) P written as P r / S, which stays positive
  next.p_var = next.p_var * cfg.r_meas / s;
  ++next.n_updates;
  return next;
}

void ConvergenceWindow::push(double t_s, double rs_hat_ohm) {
  history_.push_back({t_s, rs_hat_ohm});
}

double ConvergenceWindow::span_s() const noexcept {
  if (history_.size() < 2) return 0.0;
  return history_.back().t_s - history_.front().t_s;
}

double ConvergenceWindow::relative_change(double window_s) const {
  if (history_.empty()) return INFINITY;
  const double t_end = history_.back().t_s;
  double lo = history_.back().rs_ohm;
  double hi = lo;
  for (auto it = history_.rbegin(); it != history_.rend() && it->t_s >= t_end - window_s; ++it) {
    lo = std::min(lo, it->rs_ohm);
    hi = std::max(hi, it->rs_ohm);
  }
  const double ref = std::abs(history_.back().rs_ohm);
  return ref > 0.0 ? (hi - lo) / ref : INFINITY;
}

void ConvergenceWindow::trim(double window_s) {
  if (history_.empty()) return;
  const double t_end = history_.back().t_s;
  // keep one entry at or beyond the window edge so span_s() can reach window_s
  while (history_.size() > 1 && history_[1].t_s <= t_end - window_s) history_.pop_front();
}

bool check_convergence(const ResistanceEstimate& est, const ConvergenceWindow& window,
                       const KalmanConfig& cfg, double sample_hz) {
  if (est.n_updates == 0 || est.warmup_remaining_s > 0.0) return false;
  const auto min_updates = static_cast<std::size_t>(std::ceil(cfg.conv_window_s * sample_hz));
  if (est.n_updates < min_updates) return false;
  // half a sample of slack for timestamps accumulated in floating point
  if (window.span_s() + 0.5 / sample_hz < cfg.conv_window_s) return false;
  return window.relative_change(cfg.conv_window_s) < cfg.conv_tol_rel;
}

ResistanceEstimator::ResistanceEstimator(KalmanConfig cfg, double sample_hz)
    : cfg_(cfg), sample_hz_(sample_hz), dt_s_(1.0 / sample_hz), est_(ResistanceEstimate::initial(cfg)) {
  cfg_.validate();
  if (!(sample_hz > 0.0)) throw ConfigError("estimator: sample_hz must be > 0");
}

bool ResistanceEstimator::step(double v_f, double i_f) {
  t_s_ = static_cast<double>(samples_++) * dt_s_;
  if (est_.warmup_remaining_s > 0.0) {
    // sample k covers [t, t + dt); warm-up ends once the window is consumed
    est_.warmup_remaining_s = std::max(0.0, cfg_.warmup_s - static_cast<double>(samples_) * dt_s_);
    if (est_.warmup_remaining_s < 0.5 * dt_s_) est_.warmup_remaining_s = 0.0;
    return false;
  }
  const std::size_t before = est_.n_updates;
  est_ = kf_update(est_, cfg_, v_f, i_f);
  const bool accepted = est_.n_updates > before;
  if (accepted) {
    window_.push(t_s_, est_.rs_hat_ohm);
    window_.trim(cfg_.conv_window_s);
  }
  est_.converged = check_convergence(est_, window_, cfg_, sample_hz_);
  if (est_.converged && !convergence_time_s_) convergence_time_s_ = t_s_;
  return accepted;
}

}  // namespace parafault
