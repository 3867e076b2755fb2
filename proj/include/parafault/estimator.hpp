#pragma once

#include <cstddef>
#include <deque>
#include <optional>

namespace parafault {

/// Tuning of the scalar resistance Kalman filter. Defaults are implementation
/// choices; reports surface them alongside every estimate.
struct KalmanConfig {
  double rs0_ohm{10e-3};
  double p0_var{1e-4};          ///< (10 mOhm)^2
  double q_process{1e-14};      ///< random-walk variance per step [Ohm^2]
  double r_meas{1e-6};          ///< (1 mV)^2
  double i_min_a{0.05};         ///< smallest |i_f| that triggers a measurement update
  double conv_window_s{30.0};
  double conv_tol_rel{1e-3};
  double warmup_s{60.0};        ///< filtered output discarded after start-up

  void validate() const;
};

struct ResistanceEstimate {
  double rs_hat_ohm{10e-3};
  double p_var{1e-4};
  std::size_t n_updates{0};
  std::size_t n_rejected{0};     ///< non-finite samples dropped
  bool converged{false};
  double warmup_remaining_s{0.0};

  static ResistanceEstimate initial(const KalmanConfig& cfg);
};

/// One predict step and, when |i_f| >= i_min_a, one measurement update against
/// v_f = -Rs * i_f + noise. Non-finite samples are counted and skipped.
ResistanceEstimate kf_update(const ResistanceEstimate& est, const KalmanConfig& cfg, double v_f,
                             double i_f);

/// Trailing history of accepted estimates used for convergence detection.
class ConvergenceWindow {
public:
  void push(double t_s, double rs_hat_ohm);
  void clear() { history_.clear(); }
  bool empty() const noexcept { return history_.empty(); }
  /// Time span covered by the retained history.
  double span_s() const noexcept;
  /// (max - min) / |latest| over entries inside the trailing window.
  double relative_change(double window_s) const;
  /// Drop entries older than window_s behind the newest one.
  void trim(double window_s);

private:
  struct Entry {
    double t_s;
    double rs_ohm;
  };
  std::deque<Entry> history_;
};

/// True when the estimate held still (relative change below conv_tol_rel)
/// across a full conv_window_s of accepted updates.
bool check_convergence(const ResistanceEstimate& est, const ConvergenceWindow& window,
                       const KalmanConfig& cfg, double sample_hz);

/// Stateful driver: warm-up gating, time bookkeeping and convergence tracking
/// around kf_update for one stream of filtered samples.
class ResistanceEstimator {
public:
  ResistanceEstimator(KalmanConfig cfg, double sample_hz);

  /// Feed one filtered sample. Returns true when a measurement update was accepted.
  bool step(double v_f, double i_f);

  const ResistanceEstimate& estimate() const noexcept { return est_; }
  const KalmanConfig& config() const noexcept { return cfg_; }
  double time_s() const noexcept { return t_s_; }
  std::optional<double> convergence_time_s() const noexcept { return convergence_time_s_; }

private:
  KalmanConfig cfg_;
  double sample_hz_;
  double dt_s_;
  double t_s_{0.0};
  std::size_t samples_{0};
  ResistanceEstimate est_;
  ConvergenceWindow window_;
  std::optional<double> convergence_time_s_;
};

}  // namespace parafault
