#pragma once

// Serialization of detection results and reports. JSON carries full
// precision; CSV layouts are fixed and documented in README.md.

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "aps/analytics.hpp"
#include "aps/harmonic_regression.hpp"

namespace aps {

nlohmann::json to_json(const DetectionResult& r);
DetectionResult detection_from_json(const nlohmann::json& j);

/// One DetectionResult per line, input order.
void write_results(std::span<const DetectionResult> results, const std::filesystem::path& path);
std::vector<DetectionResult> read_results(const std::filesystem::path& path);

/// "8.84%" style, or "NA".
std::string format_percent(std::optional<double> ratio);

nlohmann::json to_json(const CorpusReport& r);
void write_report_csv(std::ostream& out, const CorpusReport& r);
void write_histogram_csv(std::ostream& out, const Histogram& h);

nlohmann::json to_json(const UnitComparison& c);
void write_unit_comparison_csv(std::ostream& out, const UnitComparison& c);

nlohmann::json to_json(const GroupComparison& g, const std::string& name_a,
                       const std::string& name_b);
/// Human-vs-generated table: metric, group a, group b, delta.
void write_comparison_csv(std::ostream& out, const GroupComparison& g, const std::string& name_a,
                          const std::string& name_b);
/// bin_lo, bin_hi, count_a, count_b.
void write_overlay_histogram_csv(std::ostream& out, const GroupComparison& g);

/// Harmonic coefficient table: k, A_k, beta, coef, std_err, t, p.
void write_coefficient_csv(std::ostream& out, const HRFit& fit);
/// Baseline coefficients, same columns with k empty.
void write_baseline_csv(std::ostream& out, const HRFit& fit);
void write_mse_csv(std::ostream& out, const MseTable& t);

/// Writes `content` to `path`, throwing std::runtime_error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace aps
