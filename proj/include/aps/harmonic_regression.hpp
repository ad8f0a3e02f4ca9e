#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "aps/analytics.hpp"
#include "aps/corpus.hpp"

namespace aps {

/// What supplies the period U_t of each token.
///   edu / sentence / paragraph: the annotated unit containing the token,
///     t counted from the unit start;
///   document: the whole document, t counted from the document start;
///   aps_hint / aps_period: the largest detected hint / refined period of
///     the document, t counted from the document start.
enum class Scaler { edu, sentence, paragraph, document, aps_hint, aps_period };

std::string_view to_string(Scaler s);
std::optional<Scaler> parse_scaler(std::string_view name);

/// Regression layout: baseline columns (intercept, min(t/U_t, 1),
/// log(1 + t)) followed, unless baseline_only, by sin/cos pairs for
/// harmonics 1..K.
struct HRDesign {
  int K = 10;
  Scaler scaler = Scaler::document;
  bool baseline_only = false;
};

std::string label(const HRDesign& d);

inline constexpr std::size_t kBaselineColumns = 3;
inline constexpr std::string_view kBaselineDescription =
    "baseline = intercept + min(t/U_t,1) + log(1+t)";

class RegressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DesignMatrix {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<std::string> columns;
  int harmonics = 0;
  std::vector<std::string> warnings;
};

/// Stacks every token of `docs` into one regression. Results are matched to
/// documents by doc_id and are only consulted for the aps_* scalers. Throws
/// RegressionError when a token's scaler cannot be resolved.
DesignMatrix build_design_matrix(std::span<const SurprisalDocument> docs,
                                 std::span<const DetectionResult> results, const HRDesign& design);

struct HRFit {
  std::vector<std::string> columns;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd std_errors;
  Eigen::VectorXd t_stats;
  Eigen::VectorXd p_values;  // two-sided, t distribution with n - p dof
  std::vector<double> amplitudes;  // A_k for k = 1..K
  double sse = 0.0;
  double mse = 0.0;
  std::size_t observations = 0;
  std::size_t dof = 0;

  /// Index of the sin (beta_1,k) and cos (beta_2,k) coefficient of harmonic k.
  std::size_t sin_index(int k) const { return kBaselineColumns + 2 * static_cast<std::size_t>(k - 1); }
  std::size_t cos_index(int k) const { return sin_index(k) + 1; }
};

/// Ordinary least squares via column-pivoted QR. Throws RegressionError when
/// rows <= columns or X is rank deficient (naming the dependent columns).
HRFit fit_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
              std::vector<std::string> columns = {});

/// fit_ols on a built design, with amplitudes filled in.
HRFit fit_design(const DesignMatrix& dm);

enum class Portion { p2, p1, sigma, sigma_minus_p1 };

std::string_view to_string(Portion p);
std::optional<Portion> parse_portion(std::string_view name);
inline constexpr Portion kAllPortions[] = {Portion::p2, Portion::p1, Portion::sigma,
                                           Portion::sigma_minus_p1};

/// Documents of `docs` belonging to a portion of the partition, in input order.
std::vector<SurprisalDocument> select_portion(std::span<const SurprisalDocument> docs,
                                              const CorpusPartition& partition, Portion portion);

struct MseTable {
  std::vector<Portion> portions;
  std::vector<std::string> designs;  // column labels
  std::vector<std::vector<std::optional<double>>> mse;  // [portion][design]
  std::vector<std::string> notes;  // why a cell is NA
};

/// In-sample MSE of every design on every portion. Cells that cannot be
/// fit (empty portion, unresolvable scaler, rank deficiency) are NA.
MseTable evaluate_mse_by_partition(std::span<const SurprisalDocument> docs,
                                   std::span<const DetectionResult> results,
                                   const CorpusPartition& partition,
                                   std::span<const HRDesign> designs);

}  // namespace aps
