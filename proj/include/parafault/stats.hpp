#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parafault/rng.hpp"

namespace parafault {

/// Cell-to-cell variation of ohmic resistance, N(mu, sigma^2).
struct CellPopulation {
  double mu_ohm{6e-3};
  double sigma_ohm{0.12e-3};
  std::string label{"fresh"};

  double kappa() const noexcept { return sigma_ohm / mu_ohm; }
  void validate() const;

  static CellPopulation fresh() { return {6e-3, 0.12e-3, "fresh"}; }
  static CellPopulation aged() { return {11e-3, 0.385e-3, "aged"}; }
  /// "fresh", "aged", or throws ConfigError.
  static CellPopulation by_name(const std::string& name);
};

/// How the faulty cell's resistance is formed.
enum class FaultMode {
  ScaleSampled,  ///< (1 + delta) * X with X ~ N(mu, sigma^2)
  ScaleMean,     ///< (1 + delta) * mu
};

std::string to_string(FaultMode mode);
FaultMode fault_mode_from_string(const std::string& s);

struct FaultSpec {
  double delta_rel{0.6};
  std::size_t n_faulty{1};
  FaultMode mode{FaultMode::ScaleSampled};

  void validate() const;
};

/// One cell resistance draw; non-positive draws are redrawn.
double sample_cell_resistance(const CellPopulation& pop, SplitMix64& rng);

/// Parallel resistance of n_cells independent healthy cells.
double sample_healthy_string(const CellPopulation& pop, std::size_t n_cells, SplitMix64& rng);

/// As sample_healthy_string, with the first fault.n_faulty cells degraded.
/// With delta_rel = 0 and the same generator state the result is identical to
/// the healthy draw.
double sample_faulty_string(const CellPopulation& pop, std::size_t n_cells, const FaultSpec& fault,
                            SplitMix64& rng);

struct MonteCarloSpec {
  std::size_t n_mc{10000};
  std::uint64_t seed{20200101};
  unsigned workers{1};
};

/// Sample streams keep threshold-design draws independent of evaluation draws.
enum class SampleStream : std::uint64_t { Design = 1, Evaluation = 2 };

/// n_mc string-resistance draws; sample k uses SplitMix64::for_sample(seed, stream, k).
/// Bit-identical for any worker count.
std::vector<double> draw_strings(const CellPopulation& pop, std::size_t n_cells,
                                 const std::optional<FaultSpec>& fault, const MonteCarloSpec& mc,
                                 SampleStream stream);

struct StringDistribution {
  std::vector<double> samples;
  double mu_s{0.0};
  double sigma_s{0.0};
  double kappa_s{0.0};
  std::size_t n_samples{0};
  std::uint64_t seed{0};
};

/// Fit sample mean and (n-1) standard deviation.
StringDistribution fit_distribution(std::vector<double> samples, std::uint64_t seed);

/// Monte Carlo distribution of healthy n_cells strings (design stream).
StringDistribution healthy_distribution(const CellPopulation& pop, std::size_t n_cells,
                                        const MonteCarloSpec& mc);

enum class ThresholdMethod {
  Normal,            ///< mu_s +- k sigma_s
  EmpiricalQuantile, ///< sample quantiles at Phi(-k), Phi(k)
};

std::string to_string(ThresholdMethod method);
ThresholdMethod threshold_method_from_string(const std::string& s);

struct ThresholdSet {
  double lower_ohm{0.0};
  double upper_ohm{0.0};
  double k_sigma{2.0};
  double mu_s{0.0};
  double sigma_s{0.0};
  ThresholdMethod method{ThresholdMethod::Normal};
  // provenance
  CellPopulation population;
  std::size_t n_cells{0};
  std::size_t n_mc{0};
  std::uint64_t seed{0};

  /// Closed band: boundaries count as inside.
  bool contains(double r) const noexcept { return r >= lower_ohm && r <= upper_ohm; }
};

/// Thresholds from a fitted distribution. Throws DomainError below 100 samples.
ThresholdSet fit_and_thresholds(const StringDistribution& dist, double k_sigma,
                                ThresholdMethod method = ThresholdMethod::Normal);

/// Fraction with its binomial standard error sqrt(p(1-p)/n).
struct RateEstimate {
  double rate{0.0};
  double std_error{0.0};
  std::size_t n{0};
};

/// Healthy draws falling outside the band.
RateEstimate false_alarm_rate(const CellPopulation& pop, std::size_t n_cells,
                              const ThresholdSet& thresholds, const MonteCarloSpec& mc);

/// Faulty draws falling inside the band (below-lower draws count as detected).
RateEstimate missed_detection_rate(const CellPopulation& pop, std::size_t n_cells,
                                   const FaultSpec& fault, const ThresholdSet& thresholds,
                                   const MonteCarloSpec& mc);

struct SweepRow {
  std::size_t n_cells{0};
  ThresholdSet thresholds;
  RateEstimate false_alarm;
  RateEstimate missed_detection;
};

/// Per string size: design thresholds, then estimate FA and MD.
std::vector<SweepRow> size_sweep(const CellPopulation& pop, const FaultSpec& fault, double k_sigma,
                                 std::span<const std::size_t> n_cells_list,
                                 const MonteCarloSpec& mc,
                                 ThresholdMethod method = ThresholdMethod::Normal);

struct Histogram {
  std::vector<double> edges;  ///< size = counts.size() + 1
  std::vector<std::size_t> counts;
};

/// Freedman-Diaconis binning; falls back to one bin when the IQR is zero.
Histogram freedman_diaconis_histogram(std::span<const double> samples);

/// Standard normal CDF.
double normal_cdf(double x) noexcept;

}  // namespace parafault
