#include "parafault/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "parafault/errors.hpp"
#include "parafault/string_model.hpp"

namespace parafault {

void CellPopulation::validate() const {
  if (!(mu_ohm > 0.0)) throw DomainError("population: mu_ohm must be > 0");
  if (!(sigma_ohm >= 0.0) || !std::isfinite(sigma_ohm)) {
    throw DomainError("population: sigma_ohm must be finite and >= 0");
  }
}

CellPopulation CellPopulation::by_name(const std::string& name) {
  if (name == "fresh") return fresh();
  if (name == "aged") return aged();
  throw ConfigError("unknown population '" + name + "' (expected fresh or aged)");
}

std::string to_string(FaultMode mode) {
  return mode == FaultMode::ScaleSampled ? "scale_sampled" : "scale_mean";
}

FaultMode fault_mode_from_string(const std::string& s) {
  if (s == "scale_sampled" || s == "sampled") return FaultMode::ScaleSampled;
  if (s == "scale_mean" || s == "mean") return FaultMode::ScaleMean;
  throw ConfigError("unknown fault mode '" + s + "'");
}

void FaultSpec::validate() const {
  if (!(delta_rel > -1.0) || !std::isfinite(delta_rel)) {
    throw DomainError("fault: delta_rel must be finite and > -1");
  }
}

std::string to_string(ThresholdMethod method) {
  return method == ThresholdMethod::Normal ? "normal" : "empirical_quantile";
}

ThresholdMethod threshold_method_from_string(const std::string& s) {
  if (s == "normal") return ThresholdMethod::Normal;
  if (s == "empirical_quantile" || s == "quantile") return ThresholdMethod::EmpiricalQuantile;
  throw ConfigError("unknown threshold method '" + s + "'");
}

namespace {

// Draws n cell resistances from one distribution object so the sequence is a
// pure function of the generator state.
void draw_cells(const CellPopulation& pop, std::size_t n, SplitMix64& rng, std::vector<double>& out) {
  out.resize(n);
  if (pop.sigma_ohm == 0.0) {
    std::fill(out.begin(), out.end(), pop.mu_ohm);
    return;
  }
  std::normal_distribution<double> dist(pop.mu_ohm, pop.sigma_ohm);
  for (auto& r : out) {
    do {
      r = dist(rng);
    } while (!(r > 0.0));
  }
}

double faulty_from_cells(const CellPopulation& pop, std::vector<double>& cells, const FaultSpec& fault) {
  if (fault.n_faulty > cells.size()) throw DomainError("fault: n_faulty exceeds n_cells");
  for (std::size_t k = 0; k < fault.n_faulty; ++k) {
    const double base = fault.mode == FaultMode::ScaleSampled ? cells[k] : pop.mu_ohm;
    cells[k] = (1.0 + fault.delta_rel) * base;
  }
  return parallel_resistance(cells);
}

}  // namespace

double sample_cell_resistance(const CellPopulation& pop, SplitMix64& rng) {
  std::vector<double> one;
  draw_cells(pop, 1, rng, one);
  return one.front();
}

double sample_healthy_string(const CellPopulation& pop, std::size_t n_cells, SplitMix64& rng) {
  pop.validate();
  if (n_cells == 0) throw DomainError("sample_healthy_string: n_cells must be >= 1");
  std::vector<double> cells;
  draw_cells(pop, n_cells, rng, cells);
  return parallel_resistance(cells);
}

double sample_faulty_string(const CellPopulation& pop, std::size_t n_cells, const FaultSpec& fault,
                            SplitMix64& rng) {
  pop.validate();
  fault.validate();
  if (n_cells == 0) throw DomainError("sample_faulty_string: n_cells must be >= 1");
  std::vector<double> cells;
  draw_cells(pop, n_cells, rng, cells);
  return faulty_from_cells(pop, cells, fault);
}

std::vector<double> draw_strings(const CellPopulation& pop, std::size_t n_cells,
                                 const std::optional<FaultSpec>& fault, const MonteCarloSpec& mc,
                                 SampleStream stream) {
  pop.validate();
  if (n_cells == 0) throw DomainError("draw_strings: n_cells must be >= 1");
  if (fault) {
    fault->validate();
    if (fault->n_faulty > n_cells) throw DomainError("fault: n_faulty exceeds n_cells");
  }

  std::vector<double> out(mc.n_mc);
  auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<double> cells;
    for (std::size_t k = begin; k < end; ++k) {
      auto rng = SplitMix64::for_sample(mc.seed, static_cast<std::uint64_t>(stream), k);
      draw_cells(pop, n_cells, rng, cells);
      out[k] = fault ? faulty_from_cells(pop, cells, *fault) : parallel_resistance(cells);
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(mc.workers, 1, std::max<std::size_t>(1, mc.n_mc));
  if (workers == 1) {
    work(0, mc.n_mc);
    return out;
  }
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (mc.n_mc + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(mc.n_mc, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, begin, end);
    }
  }
  return out;
}

StringDistribution fit_distribution(std::vector<double> samples, std::uint64_t seed) {
  StringDistribution d;
  d.n_samples = samples.size();
  d.seed = seed;
  if (!samples.empty()) {
    // shifted moments: identical samples give exactly zero spread
    const double ref = samples.front();
    double sum = 0.0;
    for (double x : samples) sum += x - ref;
    const double mean_dev = sum / static_cast<double>(samples.size());
    d.mu_s = ref + mean_dev;
    if (samples.size() > 1) {
      double ss = 0.0;
      for (double x : samples) {
        const double e = (x - ref) - mean_dev;
        ss += e * e;
      }
      d.sigma_s = std::sqrt(ss / static_cast<double>(samples.size() - 1));
    }
    d.kappa_s = d.mu_s != 0.0 ? d.sigma_s / d.mu_s : 0.0;
  }
  d.samples = std::move(samples);
  return d;
}

StringDistribution healthy_distribution(const CellPopulation& pop, std::size_t n_cells,
                                        const MonteCarloSpec& mc) {
  return fit_distribution(draw_strings(pop, n_cells, std::nullopt, mc, SampleStream::Design), mc.seed);
}

namespace {

double quantile(std::vector<double> sorted_copy, double p) {
  std::sort(sorted_copy.begin(), sorted_copy.end());
  const double h = p * static_cast<double>(sorted_copy.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted_copy.size() - 1);
  return sorted_copy[lo] + (h - static_cast<double>(lo)) * (sorted_copy[hi] - sorted_copy[lo]);
}

RateEstimate make_rate(std::size_t hits, std::size_t n) {
  RateEstimate r;
  r.n = n;
  if (n == 0) return r;
  r.rate = static_cast<double>(hits) / static_cast<double>(n);
  r.std_error = std::sqrt(r.rate * (1.0 - r.rate) / static_cast<double>(n));
  return r;
}

}  // namespace

ThresholdSet fit_and_thresholds(const StringDistribution& dist, double k_sigma, ThresholdMethod method) {
  if (dist.n_samples < 100 || dist.samples.size() != dist.n_samples) {
    throw DomainError("fit_and_thresholds: at least 100 samples required");
  }
  if (!(k_sigma >= 0.0)) throw DomainError("fit_and_thresholds: k_sigma must be >= 0");
  ThresholdSet t;
  t.k_sigma = k_sigma;
  t.mu_s = dist.mu_s;
  t.sigma_s = dist.sigma_s;
  t.method = method;
  t.n_mc = dist.n_samples;
  t.seed = dist.seed;
  if (method == ThresholdMethod::Normal) {
    t.lower_ohm = dist.mu_s - k_sigma * dist.sigma_s;
    t.upper_ohm = dist.mu_s + k_sigma * dist.sigma_s;
  } else {
    t.lower_ohm = quantile(dist.samples, normal_cdf(-k_sigma));
    t.upper_ohm = quantile(dist.samples, normal_cdf(k_sigma));
  }
  return t;
}

RateEstimate false_alarm_rate(const CellPopulation& pop, std::size_t n_cells,
                              const ThresholdSet& thresholds, const MonteCarloSpec& mc) {
  const auto draws = draw_strings(pop, n_cells, std::nullopt, mc, SampleStream::Evaluation);
  const auto outside = static_cast<std::size_t>(
      std::count_if(draws.begin(), draws.end(), [&](double r) { return !thresholds.contains(r); }));
  return make_rate(outside, draws.size());
}

RateEstimate missed_detection_rate(const CellPopulation& pop, std::size_t n_cells,
                                   const FaultSpec& fault, const ThresholdSet& thresholds,
                                   const MonteCarloSpec& mc) {
  const auto draws = draw_strings(pop, n_cells, fault, mc, SampleStream::Evaluation);
  const auto inside = static_cast<std::size_t>(
      std::count_if(draws.begin(), draws.end(), [&](double r) { return thresholds.contains(r); }));
  return make_rate(inside, draws.size());
}

std::vector<SweepRow> size_sweep(const CellPopulation& pop, const FaultSpec& fault, double k_sigma,
                                 std::span<const std::size_t> n_cells_list,
                                 const MonteCarloSpec& mc, ThresholdMethod method) {
  std::vector<SweepRow> rows;
  for (std::size_t n : n_cells_list) {
    SweepRow row;
    row.n_cells = n;
    row.thresholds = fit_and_thresholds(healthy_distribution(pop, n, mc), k_sigma, method);
    row.thresholds.population = pop;
    row.thresholds.n_cells = n;
    row.false_alarm = false_alarm_rate(pop, n, row.thresholds, mc);
    row.missed_detection = missed_detection_rate(pop, n, fault, row.thresholds, mc);
    rows.push_back(row);
  }
  return rows;
}

Histogram freedman_diaconis_histogram(std::span<const double> samples) {
  Histogram h;
  if (samples.empty()) return h;
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front();
  const double hi = sorted.back();
  const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
  const double width = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));
  std::size_t bins = 1;
  if (width > 0.0 && hi > lo) {
    bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
    bins = std::clamp<std::size_t>(bins, 1, 10000);
  }
  h.edges.resize(bins + 1);
  const double step = hi > lo ? (hi - lo) / static_cast<double>(bins) : 0.0;
  for (std::size_t k = 0; k <= bins; ++k) h.edges[k] = lo + step * static_cast<double>(k);
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double x : sorted) {
    std::size_t k = step > 0.0 ? static_cast<std::size_t>((x - lo) / step) : 0;
    h.counts[std::min(k, bins - 1)]++;
  }
  return h;
}

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace parafault
