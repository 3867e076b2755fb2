#pragma once

// First-order equivalent-circuit cell: ohmic resistance in series with one
// RC pair and a linear OCV source. Current is positive on discharge.

namespace parafault {

struct CellParams {
  double rs_ohm{5.8e-3};   ///< ohmic resistance [Ohm]
  double rt_ohm{10e-3};    ///< RC-pair (diffusion) resistance [Ohm]
  double tau_s{30.0};      ///< RC time constant [s]
  double qb_ah{5.0};       ///< capacity [Ah]
  double eta{1.0};         ///< coulombic efficiency [-]
  double ocv_a{0.8};       ///< OCV slope [V per unit SoC]
  double ocv_b{3.3};       ///< OCV intercept [V]

  /// Throws DomainError if any invariant is violated.
  void validate() const;
};

struct CellState {
  double vc_volt{0.0};     ///< RC-pair voltage [V]
  double soc{1.0};         ///< state of charge [-]
  bool saturated{false};   ///< sticky: SoC left [0, kSocMax] at some step and was clamped
};

inline constexpr double kSocMax = 1.05;

/// Linear OCV a*z + b; soc must lie in [0, 1].
double ocv(const CellParams& params, double soc);

/// Same relation without the range check, used by the simulator where a small
/// overshoot past full charge is tolerated.
double ocv_extended(const CellParams& params, double soc) noexcept;

/// Advance one step under constant current i_b using the exact zero-order-hold
/// solution of the RC pair and coulomb counting for SoC.
CellState step_cell(const CellParams& params, const CellState& state, double i_b, double dt);

/// v_b = ocv(soc) - Rs*i_b - v_C
double terminal_voltage(const CellParams& params, const CellState& state, double i_b);

}  // namespace parafault
