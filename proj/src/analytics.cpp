#include "aps/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "aps/parallel.hpp"
#include "aps/rng.hpp"

namespace aps {

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::none: return "none";
    case Classification::hint_only: return "hint_only";
    case Classification::periodic: return "periodic";
  }
  return "none";
}

std::optional<Classification> parse_classification(std::string_view name) {
  if (name == "none") return Classification::none;
  if (name == "hint_only") return Classification::hint_only;
  if (name == "periodic") return Classification::periodic;
  return std::nullopt;
}

std::optional<double> DetectionResult::largest_hint() const {
  if (hints.empty()) return std::nullopt;
  double best = 0.0;
  for (const auto& h : hints) best = std::max(best, h.period);
  return best;
}

std::optional<double> DetectionResult::largest_period() const {
  if (periods.empty()) return std::nullopt;
  std::size_t best = 0;
  for (const auto& p : periods) best = std::max(best, p.refined_period);
  return static_cast<double>(best);
}

DetectionResult detect_document(const SurprisalDocument& doc, const DetectionConfig& cfg) {
  DetectionResult r;
  r.doc_id = doc.doc_id;
  r.n = doc.size();
  r.config = cfg;
  if (doc.size() < cfg.min_length) {
    r.too_short = true;
    r.diagnostics.push_back(
        fmt::format("length {} below minimum {}; not analysed", doc.size(), cfg.min_length));
    return r;
  }
  r.threshold = permutation_threshold(doc.values, cfg.hints);
  r.hints = hints_above(periodogram(doc.values, cfg.hints.backend), r.threshold,
                        cfg.hints.confidence);
  auto filtered = acf_filtering(doc.values, r.hints, cfg.filter);
  r.periods = std::move(filtered.periods);
  for (auto& d : filtered.diagnostics) r.diagnostics.push_back(std::move(d));
  if (!r.periods.empty())
    r.classification = Classification::periodic;
  else if (!r.hints.empty())
    r.classification = Classification::hint_only;
  return r;
}

std::uint64_t document_seed(std::uint64_t run_seed, const std::string& doc_id) {
  return derive_seed(run_seed, hash_string(doc_id));
}

namespace {

DetectionResult detect_guarded(const SurprisalDocument& doc, const DetectionConfig& cfg) {
  DetectionConfig local = cfg;
  local.hints.seed = document_seed(cfg.hints.seed, doc.doc_id);
  try {
    return detect_document(doc, local);
  } catch (const std::exception& e) {
    DetectionResult r;
    r.doc_id = doc.doc_id;
    r.n = doc.size();
    r.config = local;
    r.error = e.what();
    return r;
  }
}

}  // namespace

std::vector<DetectionResult> detect_corpus(std::span<const SurprisalDocument> docs,
                                           const DetectionConfig& cfg) {
  validate(cfg.hints);
  std::vector<DetectionResult> out(docs.size());
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(docs.size());
  // One document per iteration; the permutation loop inside runs serially.
  APS_OMP_PRAGMA("omp parallel for schedule(dynamic, 1)")
  for (std::ptrdiff_t i = 0; i < count; ++i) out[i] = detect_guarded(docs[i], cfg);
  return out;
}

std::vector<DetectionResult> detect_corpus_serial(std::span<const SurprisalDocument> docs,
                                                  const DetectionConfig& cfg) {
  validate(cfg.hints);
  std::vector<DetectionResult> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) out.push_back(detect_guarded(doc, cfg));
  return out;
}

Histogram make_histogram(std::span<const double> values, double width,
                         std::optional<double> upper) {
  if (!(width > 0.0)) throw std::invalid_argument("histogram bin width must be positive");
  Histogram h;
  h.width = width;
  double top = upper.value_or(0.0);
  for (double v : values) top = std::max(top, v);
  const auto bins = static_cast<std::size_t>(std::floor(top / width)) + 1;
  h.counts.assign(bins, 0);
  for (std::size_t i = 0; i <= bins; ++i) h.edges.push_back(static_cast<double>(i) * width);
  for (double v : values) {
    if (v < 0.0) continue;
    const auto bin = std::min(static_cast<std::size_t>(std::floor(v / width)), bins - 1);
    ++h.counts[bin];
  }
  return h;
}

std::optional<SummaryStats> summarize(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  SummaryStats s;
  s.count = values.size();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.count);
  const std::size_t mid = s.count / 2;
  s.median = s.count % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  return s;
}

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

CorpusReport report_from_counts(std::size_t sigma, std::size_t p1, std::size_t p2) {
  if (p2 > p1 || p1 > sigma)
    throw std::invalid_argument(fmt::format("counts violate nesting: |Sigma|={} |P1|={} |P2|={}",
                                            sigma, p1, p2));
  CorpusReport r;
  r.sigma = sigma;
  r.p1 = p1;
  r.p2 = p2;
  r.p1_over_sigma = ratio(p1, sigma);
  r.p2_over_p1 = ratio(p2, p1);
  r.p2_over_sigma = ratio(p2, sigma);
  r.period_histogram = make_histogram({});
  return r;
}

std::map<UnitKind, double> unit_mean_lengths(std::span<const SurprisalDocument> docs) {
  std::map<UnitKind, std::pair<double, std::size_t>> acc;
  for (const auto& doc : docs) {
    for (const auto& [kind, bounds] : doc.units) {
      auto& [sum, count] = acc[kind];
      for (std::size_t len : unit_lengths(bounds, doc.size())) {
        sum += static_cast<double>(len);
        ++count;
      }
    }
  }
  std::map<UnitKind, double> means;
  for (const auto& [kind, sc] : acc)
    if (sc.second > 0) means[kind] = sc.first / static_cast<double>(sc.second);
  return means;
}

namespace {

std::vector<double> pooled_periods(std::span<const DetectionResult> results) {
  std::vector<double> out;
  for (const auto& r : results)
    for (const auto& p : r.periods) out.push_back(static_cast<double>(p.refined_period));
  return out;
}

}  // namespace

PartitionSummary partition_corpus(std::span<const DetectionResult> results,
                                  std::span<const SurprisalDocument> docs) {
  if (results.empty()) throw std::invalid_argument("cannot partition an empty result set");
  PartitionSummary s;
  std::vector<double> hint_periods;
  std::size_t errors = 0;
  for (const auto& r : results) {
    s.partition.sigma.insert(r.doc_id);
    if (r.error) ++errors;
    if (!r.hints.empty()) {
      s.partition.p1.insert(r.doc_id);
      for (const auto& h : r.hints) hint_periods.push_back(h.period);
    }
    if (!r.periods.empty()) s.partition.p2.insert(r.doc_id);
  }
  if (s.partition.sigma.size() != results.size())
    throw std::invalid_argument("duplicate doc_id in detection results");
  s.report = report_from_counts(s.partition.sigma.size(), s.partition.p1.size(),
                                s.partition.p2.size());
  const auto periods = pooled_periods(results);
  s.report.hint_lengths = summarize(hint_periods);
  s.report.period_lengths = summarize(periods);
  s.report.period_histogram = make_histogram(periods);
  s.report.unit_mean_lengths = unit_mean_lengths(docs);
  s.report.errors = errors;
  return s;
}

UnitComparison period_unit_comparison(std::span<const DetectionResult> results,
                                      std::span<const SurprisalDocument> docs) {
  UnitComparison c;
  c.unit_means = unit_mean_lengths(docs);
  if (c.unit_means.empty())
    throw std::invalid_argument(
        "no document carries unit annotations; omit the unit comparison report");
  const auto periods = pooled_periods(results);
  c.period_count = periods.size();
  c.histogram = make_histogram(periods);
  const auto share_above = [&](double bound) {
    if (periods.empty()) return 0.0;
    const auto n = std::count_if(periods.begin(), periods.end(), [&](double p) { return p > bound; });
    return static_cast<double>(n) / static_cast<double>(periods.size());
  };
  for (const auto& [kind, mean] : c.unit_means) c.fraction_above_unit_mean[kind] = share_above(mean);
  c.fraction_above_100 = share_above(100.0);
  return c;
}

GroupComparison compare_groups(std::span<const DetectionResult> a,
                               std::span<const DetectionResult> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("both groups must be non-empty");
  GroupComparison g;
  g.a = partition_corpus(a).report;
  g.b = partition_corpus(b).report;
  const auto delta = [](std::optional<double> x, std::optional<double> y) -> std::optional<double> {
    if (!x || !y) return std::nullopt;
    return *y - *x;
  };
  g.delta_p1_over_sigma = delta(g.a.p1_over_sigma, g.b.p1_over_sigma);
  g.delta_p2_over_p1 = delta(g.a.p2_over_p1, g.b.p2_over_p1);
  g.delta_p2_over_sigma = delta(g.a.p2_over_sigma, g.b.p2_over_sigma);
  const auto pa = pooled_periods(a);
  const auto pb = pooled_periods(b);
  double top = 0.0;
  for (double v : pa) top = std::max(top, v);
  for (double v : pb) top = std::max(top, v);
  g.histogram_a = make_histogram(pa, 10.0, top);
  g.histogram_b = make_histogram(pb, 10.0, top);
  const auto long_share = [](const std::vector<double>& p) {
    if (p.empty()) return 0.0;
    const auto n = std::count_if(p.begin(), p.end(), [](double v) { return v > kLongPeriod; });
    return static_cast<double>(n) / static_cast<double>(p.size());
  };
  g.long_fraction_a = long_share(pa);
  g.long_fraction_b = long_share(pb);
  return g;
}

}  // namespace aps
