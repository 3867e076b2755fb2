#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace parafault {

/// Sinusoid-plus-DC current excitation expressed in C-rate.
struct ExcitationProfile {
  double freq_hz{0.5};
  double amp_c{0.5};
  double dc_c{0.5};
  double duration_s{300.0};
  double dt_s{0.1};

  void validate() const;
  /// Number of samples, t_k = k*dt_s for k in [0, count).
  std::size_t sample_count() const;
};

/// i(t_k) = qb_ah * (dc_c + amp_c * sin(2*pi*freq_hz*t_k)), discharge positive.
std::vector<double> generate_excitation(const ExcitationProfile& profile, double qb_ah);

/// Second-order section, a0 normalised to 1. First-order sections carry b2 = a2 = 0.
struct Biquad {
  std::array<double, 3> b{};
  std::array<double, 3> a{1.0, 0.0, 0.0};
};

/// Discrete Butterworth high-pass realised as cascaded sections in transposed
/// direct form II. Each instance owns the delay line of exactly one stream.
class HighPassFilter {
public:
  HighPassFilter(double cutoff_hz, double sample_hz, int order, std::vector<Biquad> sections);

  double cutoff_hz() const noexcept { return cutoff_hz_; }
  double sample_hz() const noexcept { return sample_hz_; }
  int order() const noexcept { return order_; }
  const std::vector<Biquad>& sections() const noexcept { return sections_; }

  /// Expanded numerator and denominator polynomials in z^-1.
  std::pair<std::vector<double>, std::vector<double>> transfer_function() const;
  /// |H(e^{j 2 pi f / fs})| evaluated from the section coefficients.
  double gain_at(double freq_hz) const;
  /// Largest pole radius over all sections.
  double max_pole_radius() const;

  double process(double x) noexcept;
  /// Zero the delay line.
  void reset() noexcept;
  /// Set the delay line to the steady state of a constant input x0, so a
  /// series starting at x0 produces no start-up transient.
  void prime(double x0) noexcept;

  /// Canonical text block: cutoff, order, sample rate and coefficients at 17 significant digits.
  std::string describe() const;

private:
  double cutoff_hz_;
  double sample_hz_;
  int order_;
  std::vector<Biquad> sections_;
  std::vector<std::array<double, 2>> state_;
};

/// Butterworth high-pass by bilinear transform with prewarping at the cutoff.
HighPassFilter design_highpass(double cutoff_hz, double sample_hz, int order);

/// Causal single-pass filtering of a uniformly sampled series. Throws
/// ConfigError when sample_hz differs from the filter's rate.
std::vector<double> filter_series(HighPassFilter& filter, std::span<const double> x,
                                  double sample_hz);

}  // namespace parafault
