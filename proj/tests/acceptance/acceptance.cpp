// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "parafault/commands.hpp"
#include "parafault/estimator.hpp"
#include "parafault/io.hpp"
#include "parafault/pipeline.hpp"
#include "parafault/signals.hpp"
#include "parafault/stats.hpp"
#include "parafault/string_model.hpp"

using namespace parafault;

namespace {

int failures = 0;

void report(const std::string& id, bool ok, const std::string& detail) {
  std::printf("%s %-4s %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Fixed before any result was seen; never tuned.
constexpr std::uint64_t kSeed = 20200101;

struct PairResult {
  std::string name;
  double theory_mohm;
  double estimate_mohm;
  std::optional<double> conv_s;
};

std::vector<PairResult> table2_runs() {
  const auto cells = load_cells(PARAFAULT_DATA_DIR "/table1.cfg");
  const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  const double theory[6] = {3.17, 3.21, 3.74, 3.55, 4.20, 4.27};
  std::vector<PairResult> out;
  for (int p = 0; p < 6; ++p) {
    SimulateOptions sim;
    sim.cells = {cells[pairs[p][0]], cells[pairs[p][1]]};
    const auto tel = simulate_telemetry(sim).telemetry;
    const auto res = estimate_resistance(tel, FilterConfig{}, KalmanConfig{});
    out.push_back({"#" + std::to_string(pairs[p][0] + 1) + "+#" + std::to_string(pairs[p][1] + 1),
                   theory[p], res.final.rs_hat_ohm * 1e3, res.convergence_time_s});
  }
  return out;
}

void criterion_1_and_7() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto runs = table2_runs();
  const double per_scenario = seconds_since(t0) / 6.0;

  bool ok1 = per_scenario < 10.0;
  bool ok7 = true;
  std::string d1, d7;
  double worst = 0.0, slowest = 0.0;
  for (const auto& r : runs) {
    const double err = std::abs(r.estimate_mohm - r.theory_mohm) / r.theory_mohm;
    worst = std::max(worst, err);
    ok1 = ok1 && err <= 0.02;
    d1 += r.name + "=" + fmt("%.3f", r.estimate_mohm) + " ";
    if (!r.conv_s || *r.conv_s > 150.0) ok7 = false;
    if (r.conv_s) slowest = std::max(slowest, *r.conv_s);
    d7 += r.name + "=" + (r.conv_s ? fmt("%.1fs", *r.conv_s) : std::string("none")) + " ";
  }
  report("1", ok1,
         "two-cell string estimates vs theory within 2%: " + d1 + "mOhm; worst " +
             fmt("%.2f%%", worst * 100) + ", " + fmt("%.2fs", per_scenario) + "/scenario");
  report("7", ok7, "convergence flag by 150 s: " + d7 + "(slowest " + fmt("%.1fs", slowest) + ")");
}

void criterion_2() {
  MonteCarloSpec mc;
  mc.seed = kSeed;
  const auto t0 = std::chrono::steady_clock::now();
  const auto fresh = healthy_distribution(CellPopulation::fresh(), 5, mc);
  const auto aged = healthy_distribution(CellPopulation::aged(), 5, mc);
  const double elapsed = seconds_since(t0) / 2.0;
  auto within = [](double x, double target, double rel) { return std::abs(x - target) <= rel * target; };
  const bool ok = within(fresh.mu_s, 1.2e-3, 0.005) && within(fresh.kappa_s, 0.0089, 0.10) &&
                  within(aged.mu_s, 2.2e-3, 0.005) && within(aged.kappa_s, 0.016, 0.10) &&
                  elapsed < 1.0;
  report("2", ok,
         "5-cell strings: fresh mu_s=" + fmt("%.4f", fresh.mu_s * 1e3) + " mOhm kappa_s=" +
             fmt("%.3f%%", fresh.kappa_s * 100) + "; aged mu_s=" + fmt("%.4f", aged.mu_s * 1e3) +
             " mOhm kappa_s=" + fmt("%.3f%%", aged.kappa_s * 100) + "; " + fmt("%.3fs", elapsed) +
             " per run");
}

ThresholdSet design(const CellPopulation& pop, std::size_t n, const MonteCarloSpec& mc) {
  return fit_and_thresholds(healthy_distribution(pop, n, mc), 2.0);
}

void criterion_3() {
  MonteCarloSpec mc;
  mc.seed = kSeed;
  bool ok = true;
  std::string d;
  for (const auto& pop : {CellPopulation::fresh(), CellPopulation::aged()}) {
    const auto fa = false_alarm_rate(pop, 5, design(pop, 5, mc), mc);
    ok = ok && std::abs(fa.rate - 0.046) <= 0.006;
    d += pop.label + " FA=" + fmt("%.2f%%", fa.rate * 100) + " ";
  }
  report("3", ok, "k=2 false alarm 4.6% +- 0.6 pp: " + d);
}

void criterion_4() {
  MonteCarloSpec mc;
  mc.seed = kSeed;
  const auto pop = CellPopulation::aged();
  const auto th = design(pop, 5, mc);
  bool ok = true;
  std::string d;
  for (double delta : {0.6, 1.0}) {
    for (auto mode : {FaultMode::ScaleSampled, FaultMode::ScaleMean}) {
      const auto md = missed_detection_rate(pop, 5, FaultSpec{delta, 1, mode}, th, mc);
      ok = ok && md.rate == 0.0;
      d += fmt("delta=%.1f ", delta) + to_string(mode) + " MD=" + fmt("%.2f%%", md.rate * 100) + " ";
    }
  }
  report("4", ok, "5-cell aged missed detection = 0: " + d);
}

void criterion_5() {
  MonteCarloSpec mc;
  mc.seed = kSeed;
  const auto pop = CellPopulation::aged();
  const auto th = design(pop, 10, mc);
  bool any_mode_ok = false;
  std::string d;
  for (auto mode : {FaultMode::ScaleSampled, FaultMode::ScaleMean}) {
    const double md06 = missed_detection_rate(pop, 10, FaultSpec{0.6, 1, mode}, th, mc).rate;
    const double md10 = missed_detection_rate(pop, 10, FaultSpec{1.0, 1, mode}, th, mc).rate;
    const bool ok = std::abs(md06 - 0.0725) <= 0.015 && std::abs(md10 - 0.004) <= 0.004;
    any_mode_ok = any_mode_ok || ok;
    d += to_string(mode) + ": delta=0.6 MD=" + fmt("%.2f%%", md06 * 100) + ", delta=1.0 MD=" +
         fmt("%.2f%%", md10 * 100) + (ok ? " (in tolerance) " : " (out of tolerance) ");
  }
  report("5", any_mode_ok, "10-cell aged missed detection: " + d);
}

void criterion_6() {
  MonteCarloSpec mc;
  mc.seed = kSeed;
  const auto pop = CellPopulation::aged();
  const auto md = missed_detection_rate(pop, 80, FaultSpec{}, design(pop, 80, mc), mc);
  report("6", md.rate > 0.40, "80-cell aged delta=0.6 MD=" + fmt("%.2f%%", md.rate * 100) + " > 40%");
}

void property_parallel_resistance() {
  std::mt19937_64 gen(kSeed);
  std::uniform_real_distribution<double> r(1e-3, 20e-3);
  bool ok = true;
  for (int trial = 0; trial < 2000 && ok; ++trial) {
    std::vector<double> rs(1 + trial % 12);
    for (auto& x : rs) x = r(gen);
    const double rp = parallel_resistance(rs);
    const double rmin = *std::min_element(rs.begin(), rs.end());
    ok = ok && rp <= rmin * (1 + 1e-15) && rp >= rmin / rs.size() * (1 - 1e-15);
    auto bumped = rs;
    bumped[trial % rs.size()] *= 1.1;
    ok = ok && parallel_resistance(bumped) > rp;
    auto shuffled = rs;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    ok = ok && std::abs(parallel_resistance(shuffled) - rp) <= 1e-14 * rp;
  }
  report("8a", ok, "parallel resistance: min/N <= Rp <= min, monotone, permutation invariant");
}

void property_conservation() {
  std::mt19937_64 gen(kSeed + 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    StringConfig cfg;
    const int n = 2 + trial % 9;
    for (int k = 0; k < n; ++k) {
      CellParams c;
      c.rs_ohm = 2e-3 + 15e-3 * u(gen);
      c.rt_ohm = 5e-3 + 20e-3 * u(gen);
      c.tau_s = 10 + 50 * u(gen);
      c.qb_ah = 2 + 5 * u(gen);
      cfg.cells.push_back(c);
    }
    auto state = StringState::at_rest(cfg, 0.3 + 0.6 * u(gen));
    for (int step = 0; step < 200; ++step) {
      const double i = (u(gen) - 0.3) * 40.0;
      if (std::abs(i) < 1e-3) continue;
      state = step_string(cfg, state, i, 0.1);
      const double sum = std::accumulate(state.cell_currents.begin(), state.cell_currents.end(), 0.0);
      worst = std::max(worst, std::abs(sum - i) / std::abs(i));
    }
  }
  report("8b", worst <= 1e-9, "per-step current conservation, worst relative " + fmt("%.2e", worst));
}

void property_filter() {
  double worst_3db = 0.0, worst_dc = 0.0;
  for (int order = 1; order <= 4; ++order) {
    for (double fc : {0.01, 0.05, 0.2, 1.0}) {
      auto f = design_highpass(fc, 10.0, order);
      worst_3db = std::max(worst_3db, std::abs(f.gain_at(fc) - 1.0 / std::sqrt(2.0)));
      worst_dc = std::max(worst_dc, f.gain_at(0.0));
      // a settled constant input produces zero output
      f.prime(4.1);
      for (int k = 0; k < 100; ++k) worst_dc = std::max(worst_dc, std::abs(f.process(4.1)) / 4.1);
    }
  }
  report("8c", worst_3db <= 1e-6 && worst_dc <= 1e-12,
         "high-pass: |gain(fc) - 1/sqrt2| max " + fmt("%.2e", worst_3db) + ", DC leakage max " +
             fmt("%.2e", worst_dc));
}

// Noiseless 0.5 Hz regression stream at 10 Hz for 300 s, both channels scaled by c.
double kf_final(double c) {
  KalmanConfig cfg;
  auto est = ResistanceEstimate::initial(cfg);
  est.warmup_remaining_s = 0.0;
  for (int k = 0; k < 3000; ++k) {
    const double i = 2.5 * std::sin(2 * M_PI * 0.5 * k * 0.1 + 0.3);
    est = kf_update(est, cfg, -3.17e-3 * i * c, i * c);
  }
  return est.rs_hat_ohm;
}

void property_kf_scale() {
  const double base = kf_final(1.0);
  double worst = 0.0;
  std::string d;
  for (double c : {0.1, 0.5, 2.0, 10.0}) {
    const double dev = std::abs(kf_final(c) - base) / base;
    worst = std::max(worst, dev);
    d += fmt("x%g:", c) + fmt("%.1e ", dev);
  }
  report("8d", worst <= 1e-6, "Kalman scale equivariance <= 1e-6 relative at 300 s: " + d);
}

void property_mc_determinism() {
  MonteCarloSpec mc;
  mc.seed = kSeed;
  const auto ref = draw_strings(CellPopulation::aged(), 10, FaultSpec{}, mc, SampleStream::Evaluation);
  bool ok = true;
  for (unsigned w : {2u, 4u, 8u}) {
    mc.workers = w;
    ok = ok && draw_strings(CellPopulation::aged(), 10, FaultSpec{}, mc, SampleStream::Evaluation) == ref;
  }
  report("8e", ok, "Monte Carlo draws bit-identical for 1, 2, 4, 8 workers");
}

void property_delta_method() {
  MonteCarloSpec mc;
  mc.seed = kSeed;
  double worst = 0.0;
  for (const auto& pop : {CellPopulation::fresh(), CellPopulation::aged()}) {
    for (std::size_t n : {2u, 5u, 10u, 20u, 80u}) {
      const auto d = healthy_distribution(pop, n, mc);
      worst = std::max(worst, std::abs(d.mu_s / (pop.mu_ohm / n) - 1.0));
      worst = std::max(worst, std::abs(d.kappa_s / (pop.kappa() / std::sqrt(double(n))) - 1.0));
    }
  }
  report("8f", worst <= 0.02, "mu_s ~ mu/N and kappa_s ~ kappa/sqrt(N), worst " + fmt("%.2f%%", worst * 100));
}

}  // namespace

int main() {
  criterion_1_and_7();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  property_parallel_resistance();
  property_conservation();
  property_filter();
  property_kf_scale();
  property_mc_determinism();
  property_delta_method();
  std::printf("%d criterion line(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
