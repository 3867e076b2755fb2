#pragma once

#include <span>
#include <vector>

#include "parafault/cell_model.hpp"

namespace parafault {

/// (sum 1/R_i)^-1. Throws DomainError on an empty list or a non-positive entry.
double parallel_resistance(std::span<const double> resistances);

struct StringConfig {
  std::vector<CellParams> cells;

  std::size_t size() const noexcept { return cells.size(); }
  void validate() const;
  /// Ohmic resistance of each cell, in order.
  std::vector<double> ohmic_resistances() const;
  /// Sum of cell capacities; the string's 1C current.
  double capacity_ah() const;
};

struct StringState {
  std::vector<CellState> cell_states;
  double v_terminal{0.0};
  std::vector<double> cell_currents;

  /// All cells at the given SoC with relaxed RC pairs.
  static StringState at_rest(const StringConfig& config, double soc);
};

struct CurrentSplit {
  double v_terminal{0.0};
  std::vector<double> currents;
};

/// Distribute i_total over the cells so they share one terminal voltage. RC
/// voltages and SoC are taken as frozen at their current values.
CurrentSplit split_currents(const StringConfig& config, const StringState& state, double i_total);

/// One simulation step: split the current, record the shared terminal voltage
/// for this instant, then advance every cell by its own current over dt.
StringState step_string(const StringConfig& config, const StringState& state, double i_total,
                        double dt);

/// Sampled string trajectory; index k holds the state seen while current k flows.
struct SimulationTrace {
  double dt_s{0.1};
  std::vector<double> t_s;
  std::vector<double> i_total_a;
  std::vector<double> v_terminal_v;
  std::vector<std::vector<double>> cell_currents_a;  ///< [sample][cell]
  std::vector<std::vector<double>> soc;              ///< [sample][cell], at the start of the step
  bool saturated{false};
};

/// Drive the string with a zero-order-hold current profile sampled every dt.
SimulationTrace simulate_string(const StringConfig& config, const StringState& initial,
                                std::span<const double> currents, double dt);

}  // namespace parafault
