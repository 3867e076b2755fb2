#include "parafault/cell_model.hpp"

#include <algorithm>
#include <cmath>

#include "parafault/errors.hpp"

namespace parafault {

void CellParams::validate() const {
  if (!(rs_ohm > 0.0)) throw DomainError("cell: rs_ohm must be > 0");
  if (!(rt_ohm >= 0.0)) throw DomainError("cell: rt_ohm must be >= 0");
  if (!(tau_s > 0.0)) throw DomainError("cell: tau_s must be > 0");
  if (!(qb_ah > 0.0)) throw DomainError("cell: qb_ah must be > 0");
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("cell: eta must be in (0, 1]");
  if (!(ocv_a >= 0.0)) throw DomainError("cell: ocv_a must be >= 0");
  if (!std::isfinite(ocv_b)) throw DomainError("cell: ocv_b must be finite");
}

double ocv(const CellParams& params, double soc) {
  if (!(soc >= 0.0 && soc <= 1.0)) throw DomainError("ocv: soc outside [0, 1]");
  return ocv_extended(params, soc);
}

double ocv_extended(const CellParams& params, double soc) noexcept {
  return params.ocv_a * soc + params.ocv_b;
}

CellState step_cell(const CellParams& params, const CellState& state, double i_b, double dt) {
  if (!std::isfinite(i_b) || !std::isfinite(dt) || !std::isfinite(state.vc_volt) ||
      !std::isfinite(state.soc)) {
    throw NumericError("step_cell: non-finite input");
  }
  if (!(dt > 0.0)) throw DomainError("step_cell: dt must be > 0");

  const double decay = std::exp(-dt / params.tau_s);
  CellState next;
  next.vc_volt = decay * state.vc_volt + params.rt_ohm * (1.0 - decay) * i_b;
  next.soc = state.soc - params.eta * i_b * dt / (3600.0 * params.qb_ah);
  next.saturated = state.saturated;
  if (next.soc < 0.0 || next.soc > kSocMax) {
    next.soc = std::clamp(next.soc, 0.0, kSocMax);
    next.saturated = true;
  }
  return next;
}

double terminal_voltage(const CellParams& params, const CellState& state, double i_b) {
  return ocv_extended(params, state.soc) - params.rs_ohm * i_b - state.vc_volt;
}

}  // namespace parafault
