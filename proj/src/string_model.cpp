#include "parafault/string_model.hpp"

#include <cmath>

#include "parafault/errors.hpp"

namespace parafault {

double parallel_resistance(std::span<const double> resistances) {
  if (resistances.empty()) throw DomainError("parallel_resistance: empty list");
  double conductance = 0.0;
  for (double r : resistances) {
    if (!(r > 0.0)) throw DomainError("parallel_resistance: non-positive resistance");
    conductance += 1.0 / r;
  }
  return 1.0 / conductance;
}

void StringConfig::validate() const {
  if (cells.empty()) throw DomainError("string: at least one cell required");
  for (const auto& c : cells) c.validate();
}

std::vector<double> StringConfig::ohmic_resistances() const {
  std::vector<double> out;
  out.reserve(cells.size());
  for (const auto& c : cells) out.push_back(c.rs_ohm);
  return out;
}

double StringConfig::capacity_ah() const {
  double q = 0.0;
  for (const auto& c : cells) q += c.qb_ah;
  return q;
}

StringState StringState::at_rest(const StringConfig& config, double soc) {
  StringState s;
  s.cell_states.assign(config.size(), CellState{0.0, soc, false});
  s.cell_currents.assign(config.size(), 0.0);
  if (!config.cells.empty()) s.v_terminal = ocv_extended(config.cells.front(), soc);
  return s;
}

CurrentSplit split_currents(const StringConfig& config, const StringState& state, double i_total) {
  const std::size_t n = config.size();
  if (n == 0 || state.cell_states.size() != n) {
    throw DomainError("split_currents: state does not match string configuration");
  }
  if (!std::isfinite(i_total)) throw NumericError("split_currents: non-finite current");
  if (n == 1) {
    const auto& p = config.cells.front();
    if (!(p.rs_ohm > 0.0)) throw DomainError("split_currents: non-positive rs_ohm");
    return {terminal_voltage(p, state.cell_states.front(), i_total), {i_total}};
  }

  // v = (sum (e_i / R_i) - I) / (sum 1/R_i), e_i = ocv_i - vc_i
  double weighted_emf = 0.0;
  double conductance = 0.0;
  std::vector<double> emf(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& p = config.cells[k];
    if (!(p.rs_ohm > 0.0)) throw DomainError("split_currents: non-positive rs_ohm");
    emf[k] = ocv_extended(p, state.cell_states[k].soc) - state.cell_states[k].vc_volt;
    weighted_emf += emf[k] / p.rs_ohm;
    conductance += 1.0 / p.rs_ohm;
  }

  CurrentSplit out;
  out.v_terminal = (weighted_emf - i_total) / conductance;
  out.currents.resize(n);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    out.currents[k] = (emf[k] - out.v_terminal) / config.cells[k].rs_ohm;
    sum += out.currents[k];
  }
  // Push the rounding residual onto the lowest-resistance branch so the
  // currents sum to i_total as closely as floating point allows.
  std::size_t stiffest = 0;
  for (std::size_t k = 1; k < n; ++k) {
    if (config.cells[k].rs_ohm < config.cells[stiffest].rs_ohm) stiffest = k;
  }
  out.currents[stiffest] += i_total - sum;
  return out;
}

StringState step_string(const StringConfig& config, const StringState& state, double i_total,
                        double dt) {
  if (!(dt > 0.0)) throw DomainError("step_string: dt must be > 0");
  auto split = split_currents(config, state, i_total);
  StringState next;
  next.cell_states.resize(config.size());
  for (std::size_t k = 0; k < config.size(); ++k) {
    next.cell_states[k] = step_cell(config.cells[k], state.cell_states[k], split.currents[k], dt);
  }
  next.v_terminal = split.v_terminal;
  next.cell_currents = std::move(split.currents);
  return next;
}

SimulationTrace simulate_string(const StringConfig& config, const StringState& initial,
                                std::span<const double> currents, double dt) {
  config.validate();
  if (!(dt > 0.0)) throw DomainError("simulate_string: dt must be > 0");
  SimulationTrace trace;
  trace.dt_s = dt;
  const std::size_t n = currents.size();
  trace.t_s.reserve(n);
  trace.i_total_a.reserve(n);
  trace.v_terminal_v.reserve(n);
  trace.cell_currents_a.reserve(n);
  trace.soc.reserve(n);

  StringState state = initial;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> socs;
    socs.reserve(config.size());
    for (const auto& c : state.cell_states) socs.push_back(c.soc);
    state = step_string(config, state, currents[k], dt);
    trace.t_s.push_back(static_cast<double>(k) * dt);
    trace.i_total_a.push_back(currents[k]);
    trace.v_terminal_v.push_back(state.v_terminal);
    trace.cell_currents_a.push_back(state.cell_currents);
    trace.soc.push_back(std::move(socs));
  }
  for (const auto& c : state.cell_states) trace.saturated = trace.saturated || c.saturated;
  return trace;
}

}  // namespace parafault
