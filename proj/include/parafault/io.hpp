#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "parafault/cell_model.hpp"
#include "parafault/diagnosis.hpp"
#include "parafault/pipeline.hpp"
#include "parafault/stats.hpp"
#include "parafault/string_model.hpp"

namespace parafault {

inline constexpr int kSchemaVersion = 1;

/// Flat "key = value" text with '#' comments.
using FlatConfig = std::map<std::string, std::string>;

FlatConfig parse_flat_config(std::istream& in, const std::string& source);
FlatConfig load_flat_config(const std::filesystem::path& path);

/// Cells declared as cell.<index>.<field>; unspecified fields fall back to
/// defaults.<field>, then to the CellParams defaults. cell.<k>.capacity_fade
/// scales qb_ah by (1 - fade). Returned in ascending index order.
std::vector<CellParams> cells_from_config(const FlatConfig& cfg, const std::string& source);
std::vector<CellParams> load_cells(const std::filesystem::path& path);

/// Shortest text that round-trips (17 significant digits).
std::string format_double(double x);

void write_telemetry_csv(std::ostream& out, std::span<const TelemetrySample> telemetry);
/// Header must be t_s,i_total_a,v_terminal_v. Throws ParseError with the line number.
std::vector<TelemetrySample> read_telemetry_csv(std::istream& in, const std::string& source);
std::vector<TelemetrySample> load_telemetry_csv(const std::filesystem::path& path);

void write_simulation_trace_csv(std::ostream& out, const SimulationTrace& trace);
void write_estimate_trace_csv(std::ostream& out, std::span<const EstimateTraceRow> rows);
void write_histogram_csv(std::ostream& out, const Histogram& hist);

nlohmann::json to_json(const CellParams& p);
nlohmann::json to_json(const CellPopulation& p);
nlohmann::json to_json(const KalmanConfig& k);
nlohmann::json to_json(const FilterConfig& f);
nlohmann::json to_json(const RateEstimate& r);
nlohmann::json to_json(const ThresholdSet& t);
nlohmann::json to_json(const Verdict& v);
ThresholdSet thresholds_from_json(const nlohmann::json& j);
ThresholdSet load_thresholds(const std::filesystem::path& path);

/// 64-bit FNV-1a, used to fingerprint canonical config text in reports.
std::uint64_t fnv1a64(std::string_view text) noexcept;
std::string hex64(std::uint64_t v);

}  // namespace parafault
