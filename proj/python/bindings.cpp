#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "parafault/cell_model.hpp"
#include "parafault/diagnosis.hpp"
#include "parafault/errors.hpp"
#include "parafault/estimator.hpp"
#include "parafault/pipeline.hpp"
#include "parafault/signals.hpp"
#include "parafault/stats.hpp"
#include "parafault/string_model.hpp"

namespace py = pybind11;
using namespace parafault;

namespace {

std::vector<TelemetrySample> telemetry_from(const std::vector<double>& t, const std::vector<double>& i,
                                            const std::vector<double>& v) {
  if (t.size() != i.size() || t.size() != v.size()) {
    throw std::invalid_argument("t, i and v must have equal length");
  }
  std::vector<TelemetrySample> out(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) out[k] = {t[k], i[k], v[k]};
  return out;
}

}  // namespace

PYBIND11_MODULE(_parafault, m) {
  m.doc() = "Parallel battery string simulation, resistance estimation and fault diagnosis";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<StreamError>(m, "StreamError", PyExc_ValueError);

  py::class_<CellParams>(m, "CellParams")
      .def(py::init<>())
      .def(py::init([](double rs, double rt, double tau, double qb, double eta, double a, double b) {
             return CellParams{rs, rt, tau, qb, eta, a, b};
           }),
           py::arg("rs_ohm"), py::arg("rt_ohm") = 10e-3, py::arg("tau_s") = 30.0,
           py::arg("qb_ah") = 5.0, py::arg("eta") = 1.0, py::arg("ocv_a") = 0.8,
           py::arg("ocv_b") = 3.3)
      .def_readwrite("rs_ohm", &CellParams::rs_ohm)
      .def_readwrite("rt_ohm", &CellParams::rt_ohm)
      .def_readwrite("tau_s", &CellParams::tau_s)
      .def_readwrite("qb_ah", &CellParams::qb_ah)
      .def_readwrite("eta", &CellParams::eta)
      .def_readwrite("ocv_a", &CellParams::ocv_a)
      .def_readwrite("ocv_b", &CellParams::ocv_b);

  py::class_<CellState>(m, "CellState")
      .def(py::init([](double vc, double soc) { return CellState{vc, soc, false}; }),
           py::arg("vc_volt") = 0.0, py::arg("soc") = 1.0)
      .def_readwrite("vc_volt", &CellState::vc_volt)
      .def_readwrite("soc", &CellState::soc)
      .def_readonly("saturated", &CellState::saturated);

  m.def("ocv", &ocv, py::arg("params"), py::arg("soc"));
  m.def("step_cell", &step_cell, py::arg("params"), py::arg("state"), py::arg("i_b"), py::arg("dt"));
  m.def("terminal_voltage", &terminal_voltage, py::arg("params"), py::arg("state"), py::arg("i_b"));
  m.def("parallel_resistance",
        [](const std::vector<double>& r) { return parallel_resistance(r); }, py::arg("resistances"));

  m.def(
      "simulate_string",
      [](const std::vector<CellParams>& cells, const std::vector<double>& currents, double dt,
         double initial_soc) {
        StringConfig cfg{cells};
        auto tr = simulate_string(cfg, StringState::at_rest(cfg, initial_soc), currents, dt);
        py::dict d;
        d["t_s"] = tr.t_s;
        d["i_total_a"] = tr.i_total_a;
        d["v_terminal_v"] = tr.v_terminal_v;
        d["cell_currents_a"] = tr.cell_currents_a;
        d["soc"] = tr.soc;
        return d;
      },
      py::arg("cells"), py::arg("currents"), py::arg("dt") = 0.1, py::arg("initial_soc") = 1.0);

  py::class_<ExcitationProfile>(m, "ExcitationProfile")
      .def(py::init([](double f, double amp, double dc, double dur, double dt) {
             return ExcitationProfile{f, amp, dc, dur, dt};
           }),
           py::arg("freq_hz") = 0.5, py::arg("amp_c") = 0.5, py::arg("dc_c") = 0.5,
           py::arg("duration_s") = 300.0, py::arg("dt_s") = 0.1)
      .def_readwrite("freq_hz", &ExcitationProfile::freq_hz)
      .def_readwrite("amp_c", &ExcitationProfile::amp_c)
      .def_readwrite("dc_c", &ExcitationProfile::dc_c)
      .def_readwrite("duration_s", &ExcitationProfile::duration_s)
      .def_readwrite("dt_s", &ExcitationProfile::dt_s);
  m.def("generate_excitation", &generate_excitation, py::arg("profile"), py::arg("qb_ah"));

  py::class_<HighPassFilter>(m, "HighPassFilter")
      .def_property_readonly("cutoff_hz", &HighPassFilter::cutoff_hz)
      .def_property_readonly("sample_hz", &HighPassFilter::sample_hz)
      .def_property_readonly("order", &HighPassFilter::order)
      .def("gain_at", &HighPassFilter::gain_at)
      .def("process", &HighPassFilter::process)
      .def("reset", &HighPassFilter::reset)
      .def("prime", &HighPassFilter::prime)
      .def("transfer_function", &HighPassFilter::transfer_function)
      .def("describe", &HighPassFilter::describe);
  m.def("design_highpass", &design_highpass, py::arg("cutoff_hz"), py::arg("sample_hz"), py::arg("order") = 2);
  m.def(
      "filter_series",
      [](HighPassFilter& f, const std::vector<double>& x, double fs) { return filter_series(f, x, fs); },
      py::arg("filter"), py::arg("x"), py::arg("sample_hz"));

  py::class_<KalmanConfig>(m, "KalmanConfig")
      .def(py::init<>())
      .def_readwrite("rs0_ohm", &KalmanConfig::rs0_ohm)
      .def_readwrite("p0_var", &KalmanConfig::p0_var)
      .def_readwrite("q_process", &KalmanConfig::q_process)
      .def_readwrite("r_meas", &KalmanConfig::r_meas)
      .def_readwrite("i_min_a", &KalmanConfig::i_min_a)
      .def_readwrite("conv_window_s", &KalmanConfig::conv_window_s)
      .def_readwrite("conv_tol_rel", &KalmanConfig::conv_tol_rel)
      .def_readwrite("warmup_s", &KalmanConfig::warmup_s);

  py::class_<ResistanceEstimate>(m, "ResistanceEstimate")
      .def_static("initial", &ResistanceEstimate::initial)
      .def_readonly("rs_hat_ohm", &ResistanceEstimate::rs_hat_ohm)
      .def_readonly("p_var", &ResistanceEstimate::p_var)
      .def_readonly("n_updates", &ResistanceEstimate::n_updates)
      .def_readonly("n_rejected", &ResistanceEstimate::n_rejected)
      .def_readonly("converged", &ResistanceEstimate::converged)
      .def_readonly("warmup_remaining_s", &ResistanceEstimate::warmup_remaining_s);
  m.def("kf_update", &kf_update, py::arg("estimate"), py::arg("config"), py::arg("v_f"), py::arg("i_f"));

  py::class_<FilterConfig>(m, "FilterConfig")
      .def(py::init([](double fc, int order, double fs) { return FilterConfig{fc, order, fs}; }),
           py::arg("cutoff_hz") = 0.05, py::arg("order") = 2, py::arg("sample_hz") = 10.0)
      .def_readwrite("cutoff_hz", &FilterConfig::cutoff_hz)
      .def_readwrite("order", &FilterConfig::order)
      .def_readwrite("sample_hz", &FilterConfig::sample_hz);

  m.def(
      "estimate_resistance",
      [](const std::vector<double>& t, const std::vector<double>& i, const std::vector<double>& v,
         const FilterConfig& f, const KalmanConfig& k) {
        const auto telemetry = telemetry_from(t, i, v);
        const auto r = estimate_resistance(telemetry, f, k);
        py::dict d;
        d["rs_hat_ohm"] = r.final.rs_hat_ohm;
        d["p_var"] = r.final.p_var;
        d["converged"] = r.final.converged;
        d["n_updates"] = r.final.n_updates;
        d["convergence_time_s"] = r.convergence_time_s ? py::cast(*r.convergence_time_s) : py::none();
        return d;
      },
      py::arg("t_s"), py::arg("i_total_a"), py::arg("v_terminal_v"), py::arg("filter") = FilterConfig{},
      py::arg("kalman") = KalmanConfig{});

  py::class_<CellPopulation>(m, "CellPopulation")
      .def(py::init([](double mu, double sigma, std::string label) {
             return CellPopulation{mu, sigma, std::move(label)};
           }),
           py::arg("mu_ohm"), py::arg("sigma_ohm"), py::arg("label") = "custom")
      .def_static("fresh", &CellPopulation::fresh)
      .def_static("aged", &CellPopulation::aged)
      .def_readwrite("mu_ohm", &CellPopulation::mu_ohm)
      .def_readwrite("sigma_ohm", &CellPopulation::sigma_ohm)
      .def_readwrite("label", &CellPopulation::label)
      .def_property_readonly("kappa", &CellPopulation::kappa);

  py::enum_<FaultMode>(m, "FaultMode")
      .value("ScaleSampled", FaultMode::ScaleSampled)
      .value("ScaleMean", FaultMode::ScaleMean);

  py::class_<FaultSpec>(m, "FaultSpec")
      .def(py::init([](double d, std::size_t n, FaultMode mode) { return FaultSpec{d, n, mode}; }),
           py::arg("delta_rel") = 0.6, py::arg("n_faulty") = 1, py::arg("mode") = FaultMode::ScaleSampled)
      .def_readwrite("delta_rel", &FaultSpec::delta_rel)
      .def_readwrite("n_faulty", &FaultSpec::n_faulty)
      .def_readwrite("mode", &FaultSpec::mode);

  py::class_<MonteCarloSpec>(m, "MonteCarloSpec")
      .def(py::init([](std::size_t n, std::uint64_t seed, unsigned workers) {
             return MonteCarloSpec{n, seed, workers};
           }),
           py::arg("n_mc") = 10000, py::arg("seed") = 20200101, py::arg("workers") = 1)
      .def_readwrite("n_mc", &MonteCarloSpec::n_mc)
      .def_readwrite("seed", &MonteCarloSpec::seed)
      .def_readwrite("workers", &MonteCarloSpec::workers);

  py::class_<StringDistribution>(m, "StringDistribution")
      .def_readonly("samples", &StringDistribution::samples)
      .def_readonly("mu_s", &StringDistribution::mu_s)
      .def_readonly("sigma_s", &StringDistribution::sigma_s)
      .def_readonly("kappa_s", &StringDistribution::kappa_s)
      .def_readonly("n_samples", &StringDistribution::n_samples);
  m.def("healthy_distribution", &healthy_distribution, py::arg("population"), py::arg("n_cells"),
        py::arg("mc") = MonteCarloSpec{});

  py::enum_<ThresholdMethod>(m, "ThresholdMethod")
      .value("Normal", ThresholdMethod::Normal)
      .value("EmpiricalQuantile", ThresholdMethod::EmpiricalQuantile);

  py::class_<ThresholdSet>(m, "ThresholdSet")
      .def(py::init<>())
      .def_readwrite("lower_ohm", &ThresholdSet::lower_ohm)
      .def_readwrite("upper_ohm", &ThresholdSet::upper_ohm)
      .def_readwrite("k_sigma", &ThresholdSet::k_sigma)
      .def_readonly("mu_s", &ThresholdSet::mu_s)
      .def_readonly("sigma_s", &ThresholdSet::sigma_s)
      .def("contains", &ThresholdSet::contains);
  m.def("fit_and_thresholds", &fit_and_thresholds, py::arg("distribution"), py::arg("k_sigma") = 2.0,
        py::arg("method") = ThresholdMethod::Normal);

  py::class_<RateEstimate>(m, "RateEstimate")
      .def_readonly("rate", &RateEstimate::rate)
      .def_readonly("std_error", &RateEstimate::std_error)
      .def_readonly("n", &RateEstimate::n);
  m.def("false_alarm_rate", &false_alarm_rate, py::arg("population"), py::arg("n_cells"),
        py::arg("thresholds"), py::arg("mc") = MonteCarloSpec{});
  m.def("missed_detection_rate", &missed_detection_rate, py::arg("population"), py::arg("n_cells"),
        py::arg("fault"), py::arg("thresholds"), py::arg("mc") = MonteCarloSpec{});

  py::enum_<VerdictStatus>(m, "VerdictStatus")
      .value("Normal", VerdictStatus::Normal)
      .value("DegradationFault", VerdictStatus::DegradationFault)
      .value("LowResistanceFault", VerdictStatus::LowResistanceFault)
      .value("Indeterminate", VerdictStatus::Indeterminate);

  py::class_<Verdict>(m, "Verdict")
      .def_readonly("status", &Verdict::status)
      .def_readonly("rs_hat_ohm", &Verdict::rs_hat_ohm)
      .def_readonly("consecutive", &Verdict::consecutive)
      .def_readonly("t_s", &Verdict::t_s);
  m.def("classify", &classify, py::arg("rs_hat_ohm"), py::arg("thresholds"));
  m.def(
      "run_online",
      [](const std::vector<double>& t, const std::vector<double>& i, const std::vector<double>& v,
         const ThresholdSet& thresholds, const FilterConfig& f, const KalmanConfig& k,
         std::size_t persistence) {
        const auto telemetry = telemetry_from(t, i, v);
        return run_online(telemetry, f, k, thresholds, DiagnosisConfig{persistence, 1.0});
      },
      py::arg("t_s"), py::arg("i_total_a"), py::arg("v_terminal_v"), py::arg("thresholds"),
      py::arg("filter") = FilterConfig{}, py::arg("kalman") = KalmanConfig{}, py::arg("persistence") = 10);
}
