#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "aps/harmonic_regression.hpp"
#include "aps/synth.hpp"
#include "oracles.hpp"

using aps::DetectionResult;
using aps::HRDesign;
using aps::Scaler;
using aps::SurprisalDocument;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

DetectionResult with_periods(const std::string& id, std::vector<std::size_t> periods,
                             std::vector<double> hints = {}) {
  DetectionResult r;
  r.doc_id = id;
  for (std::size_t p : periods) {
    aps::ValidatedPeriod v;
    v.refined_period = p;
    r.periods.push_back(v);
  }
  for (double h : hints) r.hints.push_back({1, h, 1.0 / h, 1.0, 0.0, 0.9});
  return r;
}

SurprisalDocument sine_doc(const std::string& id, std::size_t n, double period, double amp,
                           double phase = 0.0) {
  SurprisalDocument d{id, std::vector<double>(n)};
  for (std::size_t t = 0; t < n; ++t)
    d.values[t] = amp * std::sin(kTwoPi * static_cast<double>(t) / period + phase);
  return d;
}

}  // namespace

TEST_CASE("design matrix for N=4, K=1, document scaler") {
  const std::vector<SurprisalDocument> docs{{"d", {1, 2, 3, 4}}};
  const auto dm = aps::build_design_matrix(docs, {}, {1, Scaler::document});
  REQUIRE(dm.X.rows() == 4);
  REQUIRE(dm.X.cols() == 5);
  CHECK(dm.columns == std::vector<std::string>{"intercept", "rel_position", "log1p_t", "sin_1",
                                               "cos_1"});
  for (int t = 0; t < 4; ++t) {
    CHECK(dm.X(t, 0) == 1.0);
    CHECK(dm.X(t, 1) == Catch::Approx(t / 4.0));
    CHECK(dm.X(t, 2) == Catch::Approx(std::log(1.0 + t)));
    CHECK(dm.X(t, 3) == Catch::Approx(std::sin(kTwoPi * t / 4.0)).margin(1e-15));
    CHECK(dm.X(t, 4) == Catch::Approx(std::cos(kTwoPi * t / 4.0)).margin(1e-15));
    CHECK(dm.y(t) == t + 1.0);
  }
  CHECK(dm.warnings.empty());
  CHECK_FALSE(aps::build_design_matrix(docs, {}, {2, Scaler::document}).warnings.empty());
}

TEST_CASE("aps_period uses the largest refined period") {
  const std::vector<SurprisalDocument> docs{sine_doc("a", 200, 52.0, 1.0)};
  const std::vector<DetectionResult> results{with_periods("a", {52, 163}, {53.2, 177.2})};
  const auto dm = aps::build_design_matrix(docs, results, {1, Scaler::aps_period});
  for (Eigen::Index t = 0; t < dm.X.rows(); ++t) {
    CHECK(dm.X(t, 1) == Catch::Approx(std::min(static_cast<double>(t) / 163.0, 1.0)));
    CHECK(dm.X(t, 3) == Catch::Approx(std::sin(kTwoPi * static_cast<double>(t) / 163.0)).margin(1e-12));
  }
  const auto dh = aps::build_design_matrix(docs, results, {1, Scaler::aps_hint});
  CHECK(dh.X(10, 3) == Catch::Approx(std::sin(kTwoPi * 10.0 / 177.2)));

  const std::vector<DetectionResult> none{with_periods("a", {})};
  CHECK_THROWS_AS(aps::build_design_matrix(docs, none, {1, Scaler::aps_period}),
                  aps::RegressionError);
  CHECK_THROWS_AS(aps::build_design_matrix(docs, {}, {1, Scaler::aps_period}),
                  aps::RegressionError);
}

TEST_CASE("sentence scaler restarts t at every boundary") {
  SurprisalDocument d{"s", std::vector<double>(25, 1.0)};
  d.units[aps::UnitKind::sentence] = {10, 20};
  const std::vector<SurprisalDocument> docs{d};
  const auto dm = aps::build_design_matrix(docs, {}, {2, Scaler::sentence});

  // Hand-built: units [0,10), [10,20), [20,25).
  Eigen::MatrixXd expected(25, 7);
  for (int row = 0; row < 25; ++row) {
    const double t = row % 10;
    const double u = row < 20 ? 10.0 : 5.0;
    expected.row(row) << 1.0, std::min(t / u, 1.0), std::log1p(t), std::sin(kTwoPi * t / u),
        std::cos(kTwoPi * t / u), std::sin(2 * kTwoPi * t / u), std::cos(2 * kTwoPi * t / u);
  }
  CHECK((dm.X - expected).cwiseAbs().maxCoeff() < 1e-12);

  SurprisalDocument bare{"b", std::vector<double>(25, 1.0)};
  const std::vector<SurprisalDocument> bare_docs{bare};
  CHECK_THROWS_AS(aps::build_design_matrix(bare_docs, {}, {1, Scaler::sentence}),
                  aps::RegressionError);
}

TEST_CASE("noiseless sinusoid recovers its amplitude") {
  const std::vector<SurprisalDocument> docs{sine_doc("a", 1000, 50.0, 0.5)};
  const std::vector<DetectionResult> results{with_periods("a", {50})};
  const auto fit = aps::fit_design(aps::build_design_matrix(docs, results, {1, Scaler::aps_period}));
  REQUIRE(fit.amplitudes.size() == 1);
  CHECK(std::abs(fit.amplitudes[0] - 0.5) < 1e-8);
  CHECK(fit.p_values(static_cast<Eigen::Index>(fit.sin_index(1))) < 1e-10);
}

TEST_CASE("amplitude does not depend on phase") {
  for (double phase : {0.0, 0.4, 1.3, 2.9, 4.0}) {
    const std::vector<SurprisalDocument> docs{sine_doc("a", 600, 40.0, 0.7, phase)};
    const std::vector<DetectionResult> results{with_periods("a", {40})};
    const auto fit =
        aps::fit_design(aps::build_design_matrix(docs, results, {2, Scaler::aps_period}));
    CHECK(fit.amplitudes[0] == Catch::Approx(0.7).epsilon(1e-8));
    CHECK(fit.amplitudes[1] < 1e-8);
  }
}

TEST_CASE("constant response has zero harmonic coefficients") {
  const std::vector<SurprisalDocument> docs{{"c", std::vector<double>(300, 4.0)}};
  const auto fit = aps::fit_design(aps::build_design_matrix(docs, {}, {3, Scaler::document}));
  CHECK(fit.coefficients(0) == Catch::Approx(4.0));
  for (int k = 1; k <= 3; ++k) {
    CHECK(std::abs(fit.coefficients(static_cast<Eigen::Index>(fit.sin_index(k)))) < 1e-10);
    CHECK(std::abs(fit.coefficients(static_cast<Eigen::Index>(fit.cos_index(k)))) < 1e-10);
    CHECK(fit.amplitudes[static_cast<std::size_t>(k - 1)] < 1e-10);
  }
  CHECK(fit.mse < 1e-20);
}

TEST_CASE("OLS agrees with the normal equations") {
  std::mt19937_64 gen(101);
  std::normal_distribution<double> d(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 30 + trial * 3;
    const int p = 2 + trial % 6;
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    oracle::Matrix Xo(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(p)));
    std::vector<double> yo(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < p; ++j) Xo[i][j] = X(i, j) = j == 0 ? 1.0 : d(gen);
      yo[i] = y(i) = d(gen);
    }
    const auto fit = aps::fit_ols(X, y);
    const auto beta = oracle::normal_equations(Xo, yo);
    for (int j = 0; j < p; ++j) CHECK(std::abs(fit.coefficients(j) - beta[j]) < 1e-8);
    CHECK(fit.dof == static_cast<std::size_t>(n - p));
  }
}

TEST_CASE("standard errors match the textbook formula") {
  // Simple regression: se(slope) = sqrt(s^2 / Sxx).
  std::mt19937_64 gen(7);
  std::normal_distribution<double> d(0.0, 1.0);
  const int n = 50;
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = i;
    y(i) = 0.3 * i + d(gen);
  }
  const auto fit = aps::fit_ols(X, y);
  const double mean_x = (n - 1) / 2.0;
  double sxx = 0.0;
  for (int i = 0; i < n; ++i) sxx += (i - mean_x) * (i - mean_x);
  const double s2 = fit.sse / (n - 2);
  CHECK(fit.std_errors(1) == Catch::Approx(std::sqrt(s2 / sxx)).epsilon(1e-10));
  CHECK(fit.t_stats(1) == Catch::Approx(fit.coefficients(1) / fit.std_errors(1)));
  CHECK(fit.p_values(1) < 1e-10);
}

TEST_CASE("rank deficiency names the dependent column") {
  // U=4 and K=2: sin(pi t) vanishes at integer t.
  std::vector<SurprisalDocument> quad;
  SurprisalDocument q{"q", {1, 5, 2, 8, 3, 9, 4, 7, 2, 6, 1, 3}};
  q.units[aps::UnitKind::sentence] = {4, 8, 12};
  quad.push_back(q);
  try {
    aps::fit_design(aps::build_design_matrix(quad, {}, {2, Scaler::sentence}));
    FAIL("expected RegressionError");
  } catch (const aps::RegressionError& e) {
    CHECK(std::string(e.what()).find("rank deficient") != std::string::npos);
  }
  Eigen::MatrixXd X(5, 2);
  X << 1, 2, 1, 2, 1, 2, 1, 2, 1, 2;
  CHECK_THROWS_AS(aps::fit_ols(X, Eigen::VectorXd::Ones(5)), aps::RegressionError);
  CHECK_THROWS_AS(aps::fit_ols(Eigen::MatrixXd::Ones(2, 2), Eigen::VectorXd::Ones(2)),
                  aps::RegressionError);
}

TEST_CASE("harmonics never raise in-sample MSE") {
  std::mt19937_64 gen(55);
  std::normal_distribution<double> d(0.0, 1.0);
  SurprisalDocument doc{"r", std::vector<double>(400)};
  for (auto& v : doc.values) v = 3.0 + d(gen);
  const std::vector<SurprisalDocument> docs{doc};
  const double base = aps::fit_design(aps::build_design_matrix(docs, {}, {0, Scaler::document, true})).mse;
  double prev = base;
  for (int K = 1; K <= 10; ++K) {
    const double mse = aps::fit_design(aps::build_design_matrix(docs, {}, {K, Scaler::document})).mse;
    CHECK(mse <= prev + 1e-12);
    prev = mse;
  }
}

TEST_CASE("labels and names") {
  CHECK(aps::label({10, Scaler::aps_period}) == "aps_period(K=10)");
  CHECK(aps::label({0, Scaler::document, true}) == "baseline");
  CHECK(aps::label({0, Scaler::sentence, true}) == "baseline[sentence]");
  CHECK(aps::parse_scaler("edu") == Scaler::edu);
  CHECK_FALSE(aps::parse_scaler("chapter"));
  CHECK(aps::parse_portion("P2") == aps::Portion::p2);
  CHECK(aps::parse_portion("Sigma-P1") == aps::Portion::sigma_minus_p1);
}

TEST_CASE("MSE table: constant single doc is exact, empty portion is NA") {
  const std::vector<SurprisalDocument> docs{{"c", std::vector<double>(50, 2.5)}};
  aps::CorpusPartition part;
  part.sigma = {"c"};
  const std::vector<HRDesign> designs{{0, Scaler::document, true}, {2, Scaler::document}};
  const auto table = aps::evaluate_mse_by_partition(docs, {}, part, designs);
  REQUIRE(table.mse.size() == 4);
  CHECK_FALSE(table.mse[0][0]);  // P2 is empty
  CHECK_FALSE(table.mse[1][0]);
  REQUIRE(table.mse[2][0]);
  CHECK(*table.mse[2][0] < 1e-20);
  REQUIRE(table.mse[3][1]);
  CHECK(table.notes.size() == 4);
}

TEST_CASE("MSE table on a planted corpus orders P2 below the rest") {
  aps::SynthSpec spec;
  spec.n_docs = 20;
  spec.length = 400;
  spec.periods = {40.0};
  spec.fraction_periodic = 0.5;
  spec.match_variance = true;
  spec.unit_length = 40;
  spec.phase = 0.0;
  const auto corpus = aps::generate(spec);
  aps::CorpusPartition part;
  for (const auto& t : corpus.truth) {
    part.sigma.insert(t.doc_id);
    if (t.periodic) {
      part.p1.insert(t.doc_id);
      part.p2.insert(t.doc_id);
    }
  }
  const std::vector<HRDesign> designs{{0, Scaler::sentence, true}, {1, Scaler::sentence}};
  const auto table = aps::evaluate_mse_by_partition(corpus.docs, {}, part, designs);
  const auto& p2 = table.mse[0];
  const auto& rest = table.mse[3];
  CHECK(*p2[1] < *p2[0]);
  CHECK(*p2[1] < *rest[1]);
  for (const auto& row : table.mse) CHECK(*row[1] <= *row[0] + 1e-12);
}
