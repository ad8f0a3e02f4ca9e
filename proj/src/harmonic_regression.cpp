#include "aps/harmonic_regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "aps/parallel.hpp"

namespace aps {

namespace {

constexpr std::pair<Scaler, std::string_view> kScalerNames[] = {
    {Scaler::edu, "edu"},           {Scaler::sentence, "sentence"},
    {Scaler::paragraph, "paragraph"}, {Scaler::document, "document"},
    {Scaler::aps_hint, "aps_hint"}, {Scaler::aps_period, "aps_period"},
};

constexpr std::pair<Portion, std::string_view> kPortionNames[] = {
    {Portion::p2, "P2"},
    {Portion::p1, "P1"},
    {Portion::sigma, "Sigma"},
    {Portion::sigma_minus_p1, "Sigma-P1"},
};

std::optional<UnitKind> unit_of(Scaler s) {
  switch (s) {
    case Scaler::edu: return UnitKind::edu;
    case Scaler::sentence: return UnitKind::sentence;
    case Scaler::paragraph: return UnitKind::paragraph;
    default: return std::nullopt;
  }
}

// (position within scope, scope length) for every token of a document.
struct TokenScope {
  std::vector<double> t;
  std::vector<double> u;
};

TokenScope resolve_scope(const SurprisalDocument& doc, const DetectionResult* result,
                         Scaler scaler) {
  const std::size_t n = doc.size();
  TokenScope s{std::vector<double>(n), std::vector<double>(n)};
  if (const auto kind = unit_of(scaler)) {
    const auto it = doc.units.find(*kind);
    if (it == doc.units.end())
      throw RegressionError(fmt::format("document '{}' has no '{}' annotations", doc.doc_id,
                                        to_string(*kind)));
    std::size_t start = 0;
    for (std::size_t len : unit_lengths(it->second, n)) {
      for (std::size_t i = 0; i < len; ++i) {
        s.t[start + i] = static_cast<double>(i);
        s.u[start + i] = static_cast<double>(len);
      }
      start += len;
    }
    return s;
  }
  double period = static_cast<double>(n);
  if (scaler == Scaler::aps_hint || scaler == Scaler::aps_period) {
    if (result == nullptr)
      throw RegressionError(fmt::format("no detection result for document '{}'", doc.doc_id));
    const auto largest =
        scaler == Scaler::aps_hint ? result->largest_hint() : result->largest_period();
    if (!largest)
      throw RegressionError(fmt::format("document '{}' has no detected {}", doc.doc_id,
                                        scaler == Scaler::aps_hint ? "hints" : "periods"));
    period = *largest;
  }
  for (std::size_t i = 0; i < n; ++i) {
    s.t[i] = static_cast<double>(i);
    s.u[i] = period;
  }
  return s;
}

}  // namespace

std::string_view to_string(Scaler s) {
  for (const auto& [k, name] : kScalerNames)
    if (k == s) return name;
  return "unknown";
}

std::optional<Scaler> parse_scaler(std::string_view name) {
  for (const auto& [k, n] : kScalerNames)
    if (n == name) return k;
  return std::nullopt;
}

std::string_view to_string(Portion p) {
  for (const auto& [k, name] : kPortionNames)
    if (k == p) return name;
  return "unknown";
}

std::optional<Portion> parse_portion(std::string_view name) {
  for (const auto& [k, n] : kPortionNames)
    if (n == name) return k;
  if (name == "sigma") return Portion::sigma;
  if (name == "sigma-P1" || name == "rest") return Portion::sigma_minus_p1;
  return std::nullopt;
}

std::string label(const HRDesign& d) {
  if (d.baseline_only)
    return d.scaler == Scaler::document ? "baseline"
                                        : fmt::format("baseline[{}]", to_string(d.scaler));
  return fmt::format("{}(K={})", to_string(d.scaler), d.K);
}

DesignMatrix build_design_matrix(std::span<const SurprisalDocument> docs,
                                 std::span<const DetectionResult> results,
                                 const HRDesign& design) {
  if (!design.baseline_only && design.K < 1)
    throw RegressionError(fmt::format("K must be >= 1, got {}", design.K));
  std::unordered_map<std::string, const DetectionResult*> by_id;
  for (const auto& r : results) by_id.emplace(r.doc_id, &r);

  DesignMatrix dm;
  dm.harmonics = design.baseline_only ? 0 : design.K;
  dm.columns = {"intercept", "rel_position", "log1p_t"};
  for (int k = 1; k <= dm.harmonics; ++k) {
    dm.columns.push_back(fmt::format("sin_{}", k));
    dm.columns.push_back(fmt::format("cos_{}", k));
  }

  std::size_t rows = 0;
  for (const auto& d : docs) rows += d.size();
  const auto cols = static_cast<Eigen::Index>(dm.columns.size());
  dm.X.resize(static_cast<Eigen::Index>(rows), cols);
  dm.y.resize(static_cast<Eigen::Index>(rows));

  double min_u = std::numeric_limits<double>::infinity();
  Eigen::Index row = 0;
  for (const auto& doc : docs) {
    const auto it = by_id.find(doc.doc_id);
    const auto scope = resolve_scope(doc, it == by_id.end() ? nullptr : it->second, design.scaler);
    for (std::size_t i = 0; i < doc.size(); ++i, ++row) {
      const double t = scope.t[i];
      const double u = scope.u[i];
      min_u = std::min(min_u, u);
      dm.y(row) = doc.values[i];
      dm.X(row, 0) = 1.0;
      dm.X(row, 1) = std::min(t / u, 1.0);
      dm.X(row, 2) = std::log1p(t);
      for (int k = 1; k <= dm.harmonics; ++k) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) * t / u;
        const auto c = static_cast<Eigen::Index>(kBaselineColumns) + 2 * (k - 1);
        dm.X(row, c) = std::sin(angle);
        dm.X(row, c + 1) = std::cos(angle);
      }
    }
  }
  if (dm.harmonics > 0 && 2.0 * dm.harmonics >= min_u)
    dm.warnings.push_back(fmt::format(
        "2K = {} >= shortest scope length {}; high harmonics alias", 2 * dm.harmonics, min_u));
  return dm;
}

HRFit fit_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::vector<std::string> columns) {
  const auto n = X.rows();
  const auto p = X.cols();
  if (y.size() != n) throw RegressionError("design and response lengths differ");
  if (n <= p)
    throw RegressionError(fmt::format("{} observations cannot support {} coefficients", n, p));
  if (columns.empty())
    for (Eigen::Index j = 0; j < p; ++j) columns.push_back(fmt::format("x{}", j));

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < p) {
    std::string dependent;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index j = qr.rank(); j < p; ++j) {
      if (!dependent.empty()) dependent += ", ";
      dependent += columns[static_cast<std::size_t>(perm(j))];
    }
    throw RegressionError(fmt::format("design is rank deficient (rank {} < {}); dependent: {}",
                                      qr.rank(), p, dependent));
  }

  HRFit fit;
  fit.columns = std::move(columns);
  fit.coefficients = qr.solve(y);
  const Eigen::VectorXd resid = y - X * fit.coefficients;
  fit.sse = resid.squaredNorm();
  fit.observations = static_cast<std::size_t>(n);
  fit.dof = static_cast<std::size_t>(n - p);
  fit.mse = fit.sse / static_cast<double>(n);
  const double sigma2 = fit.sse / static_cast<double>(fit.dof);

  // (X'X)^-1 = P R^-1 R^-T P'.
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd rinv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::VectorXd diag_perm = (rinv * rinv.transpose()).diagonal();
  Eigen::VectorXd diag(p);
  for (Eigen::Index j = 0; j < p; ++j) diag(qr.colsPermutation().indices()(j)) = diag_perm(j);

  fit.std_errors = (sigma2 * diag.array()).sqrt();
  fit.t_stats.resize(p);
  fit.p_values.resize(p);
  const boost::math::students_t dist(static_cast<double>(fit.dof));
  for (Eigen::Index j = 0; j < p; ++j) {
    const double b = fit.coefficients(j);
    const double se = fit.std_errors(j);
    double t;
    if (se > 0.0)
      t = b / se;
    else
      t = b == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), b);
    fit.t_stats(j) = t;
    fit.p_values(j) = std::isfinite(t)
        ? std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))), 0.0, 1.0)
        : 0.0;
  }
  return fit;
}

HRFit fit_design(const DesignMatrix& dm) {
  auto fit = fit_ols(dm.X, dm.y, dm.columns);
  for (int k = 1; k <= dm.harmonics; ++k) {
    const double b1 = fit.coefficients(static_cast<Eigen::Index>(fit.sin_index(k)));
    const double b2 = fit.coefficients(static_cast<Eigen::Index>(fit.cos_index(k)));
    fit.amplitudes.push_back(std::hypot(b1, b2));
  }
  return fit;
}

std::vector<SurprisalDocument> select_portion(std::span<const SurprisalDocument> docs,
                                              const CorpusPartition& partition, Portion portion) {
  std::vector<SurprisalDocument> out;
  for (const auto& d : docs) {
    const bool in_p1 = partition.p1.contains(d.doc_id);
    const bool in_p2 = partition.p2.contains(d.doc_id);
    const bool in_sigma = partition.sigma.contains(d.doc_id);
    bool take = false;
    switch (portion) {
      case Portion::p2: take = in_p2; break;
      case Portion::p1: take = in_p1; break;
      case Portion::sigma: take = in_sigma; break;
      case Portion::sigma_minus_p1: take = in_sigma && !in_p1; break;
    }
    if (take) out.push_back(d);
  }
  return out;
}

MseTable evaluate_mse_by_partition(std::span<const SurprisalDocument> docs,
                                   std::span<const DetectionResult> results,
                                   const CorpusPartition& partition,
                                   std::span<const HRDesign> designs) {
  MseTable table;
  table.portions.assign(std::begin(kAllPortions), std::end(kAllPortions));
  for (const auto& d : designs) table.designs.push_back(label(d));

  std::vector<std::vector<SurprisalDocument>> portion_docs;
  for (Portion p : table.portions) portion_docs.push_back(select_portion(docs, partition, p));

  const std::size_t np = table.portions.size();
  const std::size_t nd = designs.size();
  table.mse.assign(np, std::vector<std::optional<double>>(nd));
  std::vector<std::string> cell_notes(np * nd);
  const auto cells = static_cast<std::ptrdiff_t>(np * nd);
  APS_OMP_PRAGMA("omp parallel for schedule(dynamic, 1)")
  for (std::ptrdiff_t c = 0; c < cells; ++c) {
    const auto pi = static_cast<std::size_t>(c) / nd;
    const auto di = static_cast<std::size_t>(c) % nd;
    const auto where = fmt::format("{} x {}", to_string(table.portions[pi]), label(designs[di]));
    if (portion_docs[pi].empty()) {
      cell_notes[static_cast<std::size_t>(c)] = where + ": empty portion";
      continue;
    }
    try {
      const auto dm = build_design_matrix(portion_docs[pi], results, designs[di]);
      table.mse[pi][di] = fit_design(dm).mse;
    } catch (const RegressionError& e) {
      cell_notes[static_cast<std::size_t>(c)] = where + ": " + e.what();
    }
  }
  for (auto& note : cell_notes)
    if (!note.empty()) table.notes.push_back(std::move(note));
  return table;
}

}  // namespace aps
