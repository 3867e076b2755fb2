#include "parafault/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "parafault/errors.hpp"

namespace parafault {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_number(std::string_view text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* begin = t.data();
  const char* end = begin + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  return in;
}

}  // namespace

FlatConfig parse_flat_config(std::istream& in, const std::string& source) {
  FlatConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(source, lineno, "expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ParseError(source, lineno, "empty key");
    if (!cfg.emplace(key, value).second) throw ParseError(source, lineno, "duplicate key " + key);
  }
  return cfg;
}

FlatConfig load_flat_config(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_flat_config(in, path.string());
}

std::vector<CellParams> cells_from_config(const FlatConfig& cfg, const std::string& source) {
  CellParams defaults;
  std::map<long, std::map<std::string, double>> per_cell;

  auto number = [&](const std::string& key, const std::string& value) {
    double v = 0.0;
    if (!parse_number(value, v)) throw ConfigError(source + ": " + key + " is not a number");
    return v;
  };
  auto assign = [&](CellParams& p, double& fade, const std::string& field, double v,
                    const std::string& key) {
    if (field == "rs_ohm") p.rs_ohm = v;
    else if (field == "rt_ohm") p.rt_ohm = v;
    else if (field == "tau_s") p.tau_s = v;
    else if (field == "qb_ah") p.qb_ah = v;
    else if (field == "eta") p.eta = v;
    else if (field == "ocv_a") p.ocv_a = v;
    else if (field == "ocv_b") p.ocv_b = v;
    else if (field == "capacity_fade") fade = v;
    else throw ConfigError(source + ": unknown cell field in " + key);
  };

  double default_fade = 0.0;
  for (const auto& [key, value] : cfg) {
    if (key.rfind("defaults.", 0) == 0) {
      assign(defaults, default_fade, key.substr(9), number(key, value), key);
    } else if (key.rfind("cell.", 0) == 0) {
      const auto dot = key.find('.', 5);
      if (dot == std::string::npos) throw ConfigError(source + ": malformed key " + key);
      long index = 0;
      const std::string idx = key.substr(5, dot - 5);
      auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), index);
      if (ec != std::errc() || ptr != idx.data() + idx.size() || index < 1) {
        throw ConfigError(source + ": bad cell index in " + key);
      }
      per_cell[index][key.substr(dot + 1)] = number(key, value);
    } else if (key != "name" && key != "description") {
      throw ConfigError(source + ": unknown key " + key);
    }
  }

  std::vector<CellParams> cells;
  for (const auto& [index, fields] : per_cell) {
    CellParams p = defaults;
    double fade = default_fade;
    for (const auto& [field, v] : fields) {
      assign(p, fade, field, v, "cell." + std::to_string(index) + "." + field);
    }
    if (!(fade >= 0.0 && fade < 1.0)) throw ConfigError(source + ": capacity_fade outside [0, 1)");
    p.qb_ah *= 1.0 - fade;
    p.validate();
    cells.push_back(p);
  }
  if (cells.empty()) throw ConfigError(source + ": no cells defined");
  return cells;
}

std::vector<CellParams> load_cells(const std::filesystem::path& path) {
  return cells_from_config(load_flat_config(path), path.string());
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_telemetry_csv(std::ostream& out, std::span<const TelemetrySample> telemetry) {
  out << "t_s,i_total_a,v_terminal_v\n";
  for (const auto& s : telemetry) {
    out << format_double(s.t_s) << ',' << format_double(s.i_total_a) << ','
        << format_double(s.v_terminal_v) << '\n';
  }
}

std::vector<TelemetrySample> read_telemetry_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError(source, 1, "missing header");
  if (trim(line) != "t_s,i_total_a,v_terminal_v") {
    throw ParseError(source, 1, "expected header t_s,i_total_a,v_terminal_v");
  }
  std::vector<TelemetrySample> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    double values[3];
    std::size_t start = 0;
    for (int col = 0; col < 3; ++col) {
      const auto comma = line.find(',', start);
      const bool last = col == 2;
      if (!last && comma == std::string::npos) throw ParseError(source, lineno, "expected 3 columns");
      if (last && comma != std::string::npos) throw ParseError(source, lineno, "expected 3 columns");
      const auto field = std::string_view(line).substr(start, last ? std::string::npos : comma - start);
      if (!parse_number(field, values[col])) {
        throw ParseError(source, lineno, "bad number '" + trim(field) + "'");
      }
      start = comma + 1;
    }
    out.push_back({values[0], values[1], values[2]});
  }
  return out;
}

std::vector<TelemetrySample> load_telemetry_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_telemetry_csv(in, path.string());
}

void write_simulation_trace_csv(std::ostream& out, const SimulationTrace& trace) {
  const std::size_t cells = trace.cell_currents_a.empty() ? 0 : trace.cell_currents_a.front().size();
  out << "time_s,i_total_a,v_terminal_v";
  for (std::size_t c = 1; c <= cells; ++c) out << ",i_cell_" << c << "_a";
  for (std::size_t c = 1; c <= cells; ++c) out << ",soc_" << c;
  out << '\n';
  for (std::size_t k = 0; k < trace.t_s.size(); ++k) {
    out << format_double(trace.t_s[k]) << ',' << format_double(trace.i_total_a[k]) << ','
        << format_double(trace.v_terminal_v[k]);
    for (double i : trace.cell_currents_a[k]) out << ',' << format_double(i);
    for (double z : trace.soc[k]) out << ',' << format_double(z);
    out << '\n';
  }
}

void write_estimate_trace_csv(std::ostream& out, std::span<const EstimateTraceRow> rows) {
  out << "t_s,v_f,i_f,rs_hat_ohm,p_var,accepted\n";
  for (const auto& r : rows) {
    out << format_double(r.t_s) << ',' << format_double(r.v_f) << ',' << format_double(r.i_f) << ','
        << format_double(r.rs_hat_ohm) << ',' << format_double(r.p_var) << ','
        << (r.accepted ? 1 : 0) << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const Histogram& hist) {
  out << "bin_left_ohm,bin_right_ohm,count\n";
  for (std::size_t k = 0; k < hist.counts.size(); ++k) {
    out << format_double(hist.edges[k]) << ',' << format_double(hist.edges[k + 1]) << ','
        << hist.counts[k] << '\n';
  }
}

nlohmann::json to_json(const CellParams& p) {
  return {{"rs_ohm", p.rs_ohm}, {"rt_ohm", p.rt_ohm}, {"tau_s", p.tau_s}, {"qb_ah", p.qb_ah},
          {"eta", p.eta},       {"ocv_a", p.ocv_a},   {"ocv_b", p.ocv_b}};
}

nlohmann::json to_json(const CellPopulation& p) {
  return {{"label", p.label}, {"mu_ohm", p.mu_ohm}, {"sigma_ohm", p.sigma_ohm}, {"kappa", p.kappa()}};
}

nlohmann::json to_json(const KalmanConfig& k) {
  return {{"rs0_ohm", k.rs0_ohm},         {"p0_var", k.p0_var},
          {"q_process", k.q_process},     {"r_meas", k.r_meas},
          {"i_min_a", k.i_min_a},         {"conv_window_s", k.conv_window_s},
          {"conv_tol_rel", k.conv_tol_rel}, {"warmup_s", k.warmup_s}};
}

nlohmann::json to_json(const FilterConfig& f) {
  return {{"type", "butterworth_highpass"},
          {"cutoff_hz", f.cutoff_hz},
          {"order", f.order},
          {"sample_hz", f.sample_hz}};
}

nlohmann::json to_json(const RateEstimate& r) {
  return {{"rate", r.rate}, {"std_error", r.std_error}, {"n", r.n}};
}

nlohmann::json to_json(const ThresholdSet& t) {
  return {{"schema_version", kSchemaVersion},
          {"lower_ohm", t.lower_ohm},
          {"upper_ohm", t.upper_ohm},
          {"k_sigma", t.k_sigma},
          {"mu_s_ohm", t.mu_s},
          {"sigma_s_ohm", t.sigma_s},
          {"method", to_string(t.method)},
          {"population", to_json(t.population)},
          {"n_cells", t.n_cells},
          {"n_mc", t.n_mc},
          {"seed", t.seed}};
}

nlohmann::json to_json(const Verdict& v) {
  return {{"schema_version", kSchemaVersion}, {"t", v.t_s},
          {"status", to_string(v.status)},    {"rs_hat_ohm", v.rs_hat_ohm},
          {"upper", v.upper_ohm},             {"lower", v.lower_ohm},
          {"consecutive", v.consecutive}};
}

ThresholdSet thresholds_from_json(const nlohmann::json& j) {
  try {
    const nlohmann::json& t = j.contains("thresholds") ? j.at("thresholds") : j;
    ThresholdSet out;
    out.lower_ohm = t.at("lower_ohm").get<double>();
    out.upper_ohm = t.at("upper_ohm").get<double>();
    out.k_sigma = t.value("k_sigma", 2.0);
    out.mu_s = t.value("mu_s_ohm", 0.5 * (out.lower_ohm + out.upper_ohm));
    out.sigma_s = t.value("sigma_s_ohm", 0.0);
    out.method = threshold_method_from_string(t.value("method", std::string("normal")));
    if (t.contains("population")) {
      const auto& p = t.at("population");
      out.population = {p.at("mu_ohm").get<double>(), p.at("sigma_ohm").get<double>(),
                        p.value("label", std::string("custom"))};
    }
    out.n_cells = t.value("n_cells", std::size_t{0});
    out.n_mc = t.value("n_mc", std::size_t{0});
    out.seed = t.value("seed", std::uint64_t{0});
    if (!(out.lower_ohm <= out.upper_ohm)) throw ConfigError("thresholds: lower_ohm > upper_ohm");
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("thresholds: ") + e.what());
  }
}

ThresholdSet load_thresholds(const std::filesystem::path& path) {
  auto in = open_input(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return thresholds_from_json(j);
}

std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace parafault
