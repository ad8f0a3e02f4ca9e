#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "aps/acf_filter.hpp"
#include "aps/corpus.hpp"
#include "aps/hints.hpp"

namespace aps {

struct DetectionConfig {
  HintConfig hints;
  FilterConfig filter;
  std::size_t min_length = 32;
};

enum class Classification { none, hint_only, periodic };

std::string_view to_string(Classification c);
std::optional<Classification> parse_classification(std::string_view name);

struct DetectionResult {
  std::string doc_id;
  std::size_t n = 0;
  DetectionConfig config;  // snapshot, with the seed actually used
  double threshold = 0.0;
  std::vector<PeriodHint> hints;
  std::vector<ValidatedPeriod> periods;
  Classification classification = Classification::none;
  bool too_short = false;
  std::vector<std::string> diagnostics;
  std::optional<std::string> error;

  /// Largest hint period / largest refined period, if any.
  std::optional<double> largest_hint() const;
  std::optional<double> largest_period() const;
};

/// Hints then ACF filtering on one document, seeded with cfg.hints.seed.
/// Documents shorter than cfg.min_length come back as `none` with
/// too_short set.
DetectionResult detect_document(const SurprisalDocument& doc, const DetectionConfig& cfg);

/// Seed used for a document inside a corpus run: a function of the run seed
/// and the doc_id only, so results do not depend on file position.
std::uint64_t document_seed(std::uint64_t run_seed, const std::string& doc_id);

/// Detects every document; failures are recorded in DetectionResult::error
/// instead of aborting. Documents are spread over OpenMP threads; output
/// order equals input order.
std::vector<DetectionResult> detect_corpus(std::span<const SurprisalDocument> docs,
                                           const DetectionConfig& cfg);

/// Single-threaded reference for detect_corpus.
std::vector<DetectionResult> detect_corpus_serial(std::span<const SurprisalDocument> docs,
                                                  const DetectionConfig& cfg);

/// Sigma / P1 / P2 as doc-id sets; p2 is a subset of p1, p1 of sigma.
struct CorpusPartition {
  std::set<std::string> sigma;
  std::set<std::string> p1;
  std::set<std::string> p2;
};

/// Fixed-width bins [edges[i], edges[i+1]).
struct Histogram {
  double width = 10.0;
  std::vector<double> edges;
  std::vector<std::size_t> counts;
};

/// Bins of `width` covering [0, upper]; upper defaults to the max value.
Histogram make_histogram(std::span<const double> values, double width = 10.0,
                         std::optional<double> upper = std::nullopt);

struct SummaryStats {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
};

std::optional<SummaryStats> summarize(std::vector<double> values);

/// Table-style summary of a detection run. Ratios whose denominator is zero
/// are absent.
struct CorpusReport {
  std::size_t sigma = 0;
  std::size_t p1 = 0;
  std::size_t p2 = 0;
  std::optional<double> p1_over_sigma;
  std::optional<double> p2_over_p1;
  std::optional<double> p2_over_sigma;
  std::optional<SummaryStats> hint_lengths;    // pooled over all hints of P1 docs
  std::optional<SummaryStats> period_lengths;  // pooled over all periods of P2 docs
  Histogram period_histogram;
  std::map<UnitKind, double> unit_mean_lengths;
  std::size_t errors = 0;
};

std::optional<double> ratio(std::size_t num, std::size_t den);

/// Classification counts as a report, no per-document data needed.
CorpusReport report_from_counts(std::size_t sigma, std::size_t p1, std::size_t p2);

struct PartitionSummary {
  CorpusPartition partition;
  CorpusReport report;
};

/// Throws std::invalid_argument on empty input. `docs`, when given, feeds
/// the unit mean lengths.
PartitionSummary partition_corpus(std::span<const DetectionResult> results,
                                  std::span<const SurprisalDocument> docs = {});

/// Mean token length of every annotated unit kind, pooled over documents.
std::map<UnitKind, double> unit_mean_lengths(std::span<const SurprisalDocument> docs);

struct UnitComparison {
  std::size_t period_count = 0;
  Histogram histogram;
  std::map<UnitKind, double> unit_means;
  std::map<UnitKind, double> fraction_above_unit_mean;
  double fraction_above_100 = 0.0;
};

/// Period-length distribution against structural-unit means. Throws
/// std::invalid_argument when no document carries unit annotations.
UnitComparison period_unit_comparison(std::span<const DetectionResult> results,
                                      std::span<const SurprisalDocument> docs);

constexpr double kLongPeriod = 50.0;

struct GroupComparison {
  CorpusReport a;
  CorpusReport b;
  // b - a; absent when either side is undefined.
  std::optional<double> delta_p1_over_sigma;
  std::optional<double> delta_p2_over_p1;
  std::optional<double> delta_p2_over_sigma;
  // Shared bin edges so the histograms overlay.
  Histogram histogram_a;
  Histogram histogram_b;
  double long_fraction_a = 0.0;  // share of periods > kLongPeriod
  double long_fraction_b = 0.0;
};

GroupComparison compare_groups(std::span<const DetectionResult> a,
                               std::span<const DetectionResult> b);

}  // namespace aps
