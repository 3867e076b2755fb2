#include "parafault/signals.hpp"

#include <cmath>
#include <complex>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "parafault/errors.hpp"

namespace parafault {

void ExcitationProfile::validate() const {
  if (!(freq_hz > 0.0)) throw ConfigError("excitation: freq_hz must be > 0");
  if (!(duration_s > 0.0)) throw ConfigError("excitation: duration_s must be > 0");
  if (!(dt_s > 0.0)) throw ConfigError("excitation: dt_s must be > 0");
  // at least 10 samples per period
  if (dt_s * 10.0 * freq_hz > 1.0 + 1e-12) {
    throw ConfigError("excitation: dt_s must not exceed 1/(10*freq_hz)");
  }
  if (!std::isfinite(amp_c) || !std::isfinite(dc_c)) {
    throw ConfigError("excitation: amplitudes must be finite");
  }
}

std::size_t ExcitationProfile::sample_count() const {
  return static_cast<std::size_t>(std::floor(duration_s / dt_s + 1e-9));
}

std::vector<double> generate_excitation(const ExcitationProfile& profile, double qb_ah) {
  profile.validate();
  if (!(qb_ah > 0.0)) throw ConfigError("excitation: qb_ah must be > 0");
  const std::size_t n = profile.sample_count();
  const double w = 2.0 * std::numbers::pi * profile.freq_hz;
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * profile.dt_s;
    out[k] = qb_ah * (profile.dc_c + profile.amp_c * std::sin(w * t));
  }
  return out;
}

HighPassFilter::HighPassFilter(double cutoff_hz, double sample_hz, int order,
                               std::vector<Biquad> sections)
    : cutoff_hz_(cutoff_hz),
      sample_hz_(sample_hz),
      order_(order),
      sections_(std::move(sections)),
      state_(sections_.size(), {0.0, 0.0}) {}

double HighPassFilter::process(double x) noexcept {
  for (std::size_t k = 0; k < sections_.size(); ++k) {
    const auto& s = sections_[k];
    auto& z = state_[k];
    const double y = s.b[0] * x + z[0];
    z[0] = s.b[1] * x - s.a[1] * y + z[1];
    z[1] = s.b[2] * x - s.a[2] * y;
    x = y;
  }
  return x;
}

void HighPassFilter::reset() noexcept {
  for (auto& z : state_) z = {0.0, 0.0};
}

void HighPassFilter::prime(double x0) noexcept {
  // Zero DC gain: the first section settles at output 0, so every later
  // section sees zero input and stays at rest.
  reset();
  if (sections_.empty()) return;
  const auto& s = sections_.front();
  state_.front() = {-s.b[0] * x0, s.b[2] * x0};
}

std::pair<std::vector<double>, std::vector<double>> HighPassFilter::transfer_function() const {
  std::vector<double> num{1.0};
  std::vector<double> den{1.0};
  auto convolve = [](const std::vector<double>& p, const std::array<double, 3>& q, std::size_t len) {
    std::vector<double> r(p.size() + len - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < len; ++j) r[i + j] += p[i] * q[j];
    }
    return r;
  };
  for (const auto& s : sections_) {
    const std::size_t len = (s.b[2] == 0.0 && s.a[2] == 0.0) ? 2 : 3;
    num = convolve(num, s.b, len);
    den = convolve(den, s.a, len);
  }
  return {num, den};
}

double HighPassFilter::gain_at(double freq_hz) const {
  const double w = 2.0 * std::numbers::pi * freq_hz / sample_hz_;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  std::complex<double> h{1.0, 0.0};
  for (const auto& s : sections_) {
    h *= (s.b[0] + s.b[1] * z1 + s.b[2] * z2) / (s.a[0] + s.a[1] * z1 + s.a[2] * z2);
  }
  return std::abs(h);
}

double HighPassFilter::max_pole_radius() const {
  double r = 0.0;
  for (const auto& s : sections_) {
    if (s.a[2] == 0.0) {
      r = std::max(r, std::abs(s.a[1]));
      continue;
    }
    const std::complex<double> disc = std::sqrt(std::complex<double>(s.a[1] * s.a[1] - 4.0 * s.a[2]));
    r = std::max({r, std::abs((-s.a[1] + disc) / 2.0), std::abs((-s.a[1] - disc) / 2.0)});
  }
  return r;
}

std::string HighPassFilter::describe() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "butterworth_highpass\n";
  os << "cutoff_hz " << cutoff_hz_ << "\n";
  os << "order " << order_ << "\n";
  os << "sample_hz " << sample_hz_ << "\n";
  os << "sections " << sections_.size() << "\n";
  for (std::size_t k = 0; k < sections_.size(); ++k) {
    const auto& s = sections_[k];
    os << "section " << k << " b " << s.b[0] << ' ' << s.b[1] << ' ' << s.b[2] << " a " << s.a[0]
       << ' ' << s.a[1] << ' ' << s.a[2] << "\n";
  }
  return os.str();
}

HighPassFilter design_highpass(double cutoff_hz, double sample_hz, int order) {
  if (!(sample_hz > 0.0)) throw DomainError("design_highpass: sample_hz must be > 0");
  if (!(cutoff_hz > 0.0 && cutoff_hz < sample_hz / 2.0)) {
    throw DomainError("design_highpass: cutoff must lie in (0, Nyquist)");
  }
  if (order < 1) throw DomainError("design_highpass: order must be >= 1");

  const double fs2 = 2.0 * sample_hz;
  const double wc = fs2 * std::tan(std::numbers::pi * cutoff_hz / sample_hz);  // prewarped
  const double pi = std::numbers::pi;

  // Analog high-pass poles wc/p_k from the unit-circle low-pass prototype,
  // mapped to z by the bilinear transform. Zeros all land on z = 1.
  auto digital_pole = [&](int k) {
    const std::complex<double> proto =
        std::polar(1.0, pi * (2.0 * k + order + 1.0) / (2.0 * order));
    const std::complex<double> s = wc / proto;
    return (fs2 + s) / (fs2 - s);
  };

  std::vector<Biquad> sections;
  for (int k = 0; k < order / 2; ++k) {
    const std::complex<double> p = digital_pole(k);
    Biquad q;
    q.a = {1.0, -2.0 * p.real(), std::norm(p)};
    // unit gain at Nyquist, where the analog high-pass gain is 1
    const double g = (1.0 - q.a[1] + q.a[2]) / 4.0;
    q.b = {g, -2.0 * g, g};
    sections.push_back(q);
  }
  if (order % 2 == 1) {
    const double p = digital_pole(order / 2).real();
    Biquad q;
    q.a = {1.0, -p, 0.0};
    const double g = (1.0 + p) / 2.0;
    q.b = {g, -g, 0.0};
    sections.push_back(q);
  }
  return HighPassFilter(cutoff_hz, sample_hz, order, std::move(sections));
}

std::vector<double> filter_series(HighPassFilter& filter, std::span<const double> x,
                                  double sample_hz) {
  if (!(std::abs(sample_hz - filter.sample_hz()) <= 1e-9 * filter.sample_hz())) {
    throw ConfigError("filter_series: series sampled at a different rate than the filter");
  }
  std::vector<double> y;
  y.reserve(x.size());
  for (double v : x) y.push_back(filter.process(v));
  return y;
}

}  // namespace parafault
