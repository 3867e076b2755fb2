#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "parafault/errors.hpp"
#include "parafault/signals.hpp"

using namespace parafault;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed-form magnitude of a prewarped bilinear Butterworth high-pass.
double analytic_gain(double f, double fc, double fs, int order) {
  const double ratio = std::tan(kPi * fc / fs) / std::tan(kPi * f / fs);
  return 1.0 / std::sqrt(1.0 + std::pow(ratio, 2 * order));
}

double steady_amplitude(std::span<const double> y, std::size_t from) {
  double peak = 0.0;
  for (std::size_t k = from; k < y.size(); ++k) peak = std::max(peak, std::abs(y[k]));
  return peak;
}

}  // namespace

TEST_CASE("excitation profile") {
  ExcitationProfile p;  // 0.5 Hz, 0.5C + 0.5C DC, 300 s at 10 Hz
  const auto i = generate_excitation(p, 5.0);
  REQUIRE(i.size() == 3000);
  CHECK(i[0] == doctest::Approx(2.5).epsilon(1e-15));   // sin = 0
  CHECK(i[10] == doctest::Approx(2.5).epsilon(1e-12));  // t = 1 s, sin(pi) = 0
  CHECK(i[5] == doctest::Approx(5.0).epsilon(1e-12));   // t = 0.5 s, peak
  CHECK(i[15] == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
  CHECK(*std::min_element(i.begin(), i.end()) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  p.amp_c = 0.0;
  for (double x : generate_excitation(p, 5.0)) CHECK(x == 2.5);
}

TEST_CASE("excitation validation") {
  ExcitationProfile p;
  p.dt_s = 0.25;  // fewer than 10 samples per 0.5 Hz period
  CHECK_THROWS_AS(generate_excitation(p, 5.0), ConfigError);
  p = {};
  p.freq_hz = 0.0;
  CHECK_THROWS_AS(generate_excitation(p, 5.0), ConfigError);
  p = {};
  p.duration_s = 0.0;
  CHECK_THROWS_AS(generate_excitation(p, 5.0), ConfigError);
  CHECK_THROWS_AS(generate_excitation(ExcitationProfile{}, 0.0), ConfigError);
}

TEST_CASE("coefficients match a reference Butterworth design") {
  // scipy.signal.butter(N, 0.05, 'highpass', fs=10)
  const std::vector<std::pair<std::vector<double>, std::vector<double>>> ref{
      {{0.9845337085968967, -0.9845337085968967}, {1.0, -0.9690674171937933}},
      {{0.9780304792065599, -1.9560609584131199, 0.9780304792065599},
       {1.0, -1.9555782403150352, 0.9565436765112031}},
      {{0.969071174031813, -2.907213522095439, 2.907213522095439, -0.969071174031813},
       {1.0, -2.9371707284498907, 2.8762997234793315, -0.939098940325283}},
      {{0.9597822300872386, -3.8391289203489545, 5.7586933805234315, -3.8391289203489545,
        0.9597822300872386},
       {1.0, -3.9179078653919865, 5.7570763791180655, -3.7603495076945257, 0.921181929191236}}};
  for (int order = 1; order <= 4; ++order) {
    const auto [b, a] = design_highpass(0.05, 10.0, order).transfer_function();
    const auto& [rb, ra] = ref[static_cast<std::size_t>(order - 1)];
    REQUIRE(b.size() == rb.size());
    REQUIRE(a.size() == ra.size());
    for (std::size_t k = 0; k < b.size(); ++k) {
      CHECK(b[k] == doctest::Approx(rb[k]).epsilon(1e-10));
      CHECK(a[k] == doctest::Approx(ra[k]).epsilon(1e-10));
    }
  }
}

TEST_CASE("3 dB at cutoff, flat passband, zero DC gain, stable") {
  for (int order = 1; order <= 8; ++order) {
    for (double fc : {0.05, 0.2, 1.0}) {
      const auto f = design_highpass(fc, 10.0, order);
      CHECK(f.gain_at(fc) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
      CHECK(std::abs(f.gain_at(fc) - 1.0 / std::sqrt(2.0)) < 1e-6);
      CHECK(f.gain_at(1e-9) < 1e-6);
      CHECK(f.max_pole_radius() < 1.0);
      const auto [b, a] = f.transfer_function();
      double sum = 0.0;
      for (double x : b) sum += x;
      CHECK(std::abs(sum) < 1e-12);
      for (double freq : {0.01, 0.1, 0.5, 2.0, 4.9}) {
        CHECK(f.gain_at(freq) == doctest::Approx(analytic_gain(freq, fc, 10.0, order)).epsilon(1e-9));
      }
    }
  }
  CHECK(design_highpass(0.05, 10.0, 2).gain_at(0.5) >= 0.99);
  CHECK(design_highpass(0.05, 10.0, 2).gain_at(0.5) ==
        doctest::Approx(analytic_gain(0.5, 0.05, 10.0, 2)).epsilon(1e-12));
}

TEST_CASE("design_highpass rejects invalid arguments") {
  CHECK_THROWS_AS(design_highpass(5.0, 10.0, 2), DomainError);
  CHECK_THROWS_AS(design_highpass(6.0, 10.0, 2), DomainError);
  CHECK_THROWS_AS(design_highpass(0.0, 10.0, 2), DomainError);
  CHECK_THROWS_AS(design_highpass(0.05, 10.0, 0), DomainError);
}

TEST_CASE("time-domain behaviour") {
  auto f = design_highpass(0.05, 10.0, 2);

  SUBCASE("zero in, zero out") {
    const std::vector<double> x(1000, 0.0);
    for (double y : filter_series(f, x, 10.0)) CHECK(y == 0.0);
  }
  SUBCASE("constant input decays to zero") {
    const std::vector<double> x(3000, 4.1);
    const auto y = filter_series(f, x, 10.0);
    CHECK(std::abs(y.back()) < 1e-9);
  }
  SUBCASE("step transient below 1e-3 of the step after 60 s") {
    std::vector<double> x(1200, 1.0);
    std::fill(x.begin(), x.begin() + 100, 0.0);  // step at t = 10 s
    const auto y = filter_series(f, x, 10.0);
    CHECK(y[100] == doctest::Approx(f.sections()[0].b[0]));
    CHECK(std::abs(y[100 + 600]) < 1e-3);
  }
  SUBCASE("0.5 Hz sinusoid passes within 1 %") {
    std::vector<double> x(3000);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::sin(2.0 * kPi * 0.5 * k / 10.0);
    const auto y = filter_series(f, x, 10.0);
    CHECK(steady_amplitude(y, 1000) == doctest::Approx(1.0).epsilon(0.01));
  }
  SUBCASE("primed filter gives no start-up transient") {
    f.prime(4.1);
    const std::vector<double> x(100, 4.1);
    for (double y : filter_series(f, x, 10.0)) CHECK(y == 0.0);
  }
  SUBCASE("sample-rate mismatch") {
    const std::vector<double> x(10, 1.0);
    CHECK_THROWS_AS(filter_series(f, x, 20.0), ConfigError);
  }
}

TEST_CASE("each instance owns its own delay line") {
  const auto proto = design_highpass(0.05, 10.0, 2);
  HighPassFilter a = proto;
  HighPassFilter b = proto;
  std::vector<double> x(200);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::sin(0.3 * k);
  const auto ya = filter_series(a, x, 10.0);
  const std::vector<double> z(200, 0.0);
  filter_series(b, z, 10.0);  // b sees nothing
  HighPassFilter c = proto;
  CHECK(filter_series(c, x, 10.0) == ya);
}

TEST_CASE("property: linearity and time invariance from a fresh state") {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int order = 1 + trial % 4;
    const auto proto = design_highpass(0.05, 10.0, order);
    std::vector<double> x(2000), y(2000), mix(2000);
    const double alpha = coef(gen), beta = coef(gen);
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] = nd(gen);
      y[k] = nd(gen);
      mix[k] = alpha * x[k] + beta * y[k];
    }
    auto f1 = proto, f2 = proto, f3 = proto;
    const auto fx = filter_series(f1, x, 10.0);
    const auto fy = filter_series(f2, y, 10.0);
    const auto fm = filter_series(f3, mix, 10.0);
    for (std::size_t k = 0; k < x.size(); ++k) {
      CHECK(std::abs(fm[k] - (alpha * fx[k] + beta * fy[k])) <= 1e-10);
    }
    // delaying the input delays the output
    std::vector<double> shifted(x.size() + 37, 0.0);
    std::copy(x.begin(), x.end(), shifted.begin() + 37);
    auto f4 = proto;
    const auto fs = filter_series(f4, shifted, 10.0);
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(std::abs(fs[k + 37] - fx[k]) <= 1e-12);
  }
}

TEST_CASE("property: bounded over 1e6 samples and no limit cycle at rest") {
  auto f = design_highpass(0.05, 10.0, 2);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double peak = 0.0;
  for (int k = 0; k < 1'000'000; ++k) peak = std::max(peak, std::abs(f.process(u(gen))));
  CHECK(peak < 4.0);
  double tail = 0.0;
  for (int k = 0; k < 20'000; ++k) {
    const double y = f.process(0.0);
    if (k > 10'000) tail = std::max(tail, std::abs(y));
  }
  CHECK(tail < 1e-9);
}

TEST_CASE("canonical description round-trips the coefficients") {
  const auto f = design_highpass(0.05, 10.0, 3);
  const std::string text = f.describe();
  CHECK(text.find("cutoff_hz 0.050000000000000003") != std::string::npos);
  CHECK(text.find("order 3") != std::string::npos);
  CHECK(text.find("sample_hz 10") != std::string::npos);
  std::istringstream in(text);
  std::string line;
  std::size_t idx = 0;
  while (std::getline(in, line)) {
    if (line.rfind("section ", 0) != 0) continue;
    std::istringstream ls(line);
    std::string tag, btag, atag;
    std::size_t k;
    Biquad q;
    ls >> tag >> k >> btag >> q.b[0] >> q.b[1] >> q.b[2] >> atag >> q.a[0] >> q.a[1] >> q.a[2];
    REQUIRE(idx < f.sections().size());
    CHECK(q.b == f.sections()[idx].b);
    CHECK(q.a == f.sections()[idx].a);
    ++idx;
  }
  CHECK(idx == f.sections().size());
}
