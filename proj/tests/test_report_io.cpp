#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>

#include "aps/report_io.hpp"
#include "aps/svg.hpp"
#include "aps/synth.hpp"

using aps::DetectionResult;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("detection results round-trip through JSONL") {
  aps::SynthSpec spec;
  spec.n_docs = 4;
  spec.fraction_periodic = 0.5;
  auto docs = aps::generate(spec).docs;
  docs.push_back({"short", {1, 2, 3}});
  const auto results = aps::detect_corpus(docs, {});
  const auto path = std::filesystem::temp_directory_path() / "aps_results_roundtrip.jsonl";
  aps::write_results(results, path);
  const auto back = aps::read_results(path);
  REQUIRE(back.size() == results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    CHECK(aps::to_json(back[i]) == aps::to_json(results[i]));
    CHECK(back[i].hints == results[i].hints);
    CHECK(back[i].periods == results[i].periods);
  }
  CHECK(back.back().too_short);
}

TEST_CASE("percent formatting") {
  CHECK(aps::format_percent(221.0 / 2499.0) == "8.84%");
  CHECK(aps::format_percent(std::nullopt) == "NA");
  CHECK(aps::format_percent(1.0) == "100.00%");
}

TEST_CASE("report CSV layout") {
  auto r = aps::report_from_counts(2499, 221, 131);
  std::ostringstream out;
  aps::write_report_csv(out, r);
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() >= 7);
  CHECK(lines[0] == "metric,value,percent");
  CHECK(lines[1] == "|Sigma|,2499,");
  CHECK(lines[4].ends_with(",8.84%"));
  CHECK(lines[5].ends_with(",59.28%"));
  CHECK(lines[6].ends_with(",5.24%"));
  CHECK(lines[7] == "P1 hint mean,NA,");
}

TEST_CASE("comparison CSV uses percentage-point deltas") {
  std::vector<DetectionResult> a(4), b(4);
  for (int i = 0; i < 4; ++i) {
    a[i].doc_id = "a" + std::to_string(i);
    b[i].doc_id = "b" + std::to_string(i);
  }
  aps::PeriodHint h{1, 60, 1.0 / 60, 1, 0, 0.9};
  aps::ValidatedPeriod p;
  p.refined_period = 60;
  b[0].hints = {h};
  b[0].periods = {p};
  const auto g = aps::compare_groups(a, b);
  std::ostringstream out;
  aps::write_comparison_csv(out, g, "human", "generated");
  const auto lines = lines_of(out.str());
  CHECK(lines[0] == "metric,human,generated,delta");
  CHECK(lines[3] == "|P2|,0,1,1");
  CHECK(lines[6] == "|P2|/|Sigma|,0.00%,25.00%,25.00");
  CHECK(lines[5] == "|P2|/|P1|,NA,100.00%,NA");
  CHECK(lines[7] == "periods>50,0.00%,100.00%,100.00");
}

TEST_CASE("histogram CSV") {
  const std::vector<double> v{3, 15, 18};
  std::ostringstream out;
  aps::write_histogram_csv(out, aps::make_histogram(v));
  CHECK(out.str() == "bin_lo,bin_hi,count\n0,10,1\n10,20,2\n");
}

TEST_CASE("MSE CSV prints NA for missing cells") {
  aps::MseTable t;
  t.portions = {aps::Portion::p2, aps::Portion::sigma};
  t.designs = {"baseline", "document(K=1)"};
  t.mse = {{1.23456, std::nullopt}, {2.0, 1.5}};
  std::ostringstream out;
  aps::write_mse_csv(out, t);
  CHECK(out.str() == "portion,baseline,document(K=1)\nP2,1.2346,NA\nSigma,2.0000,1.5000\n");
}

TEST_CASE("coefficient CSV has two rows per harmonic") {
  Eigen::MatrixXd X(40, 5);
  Eigen::VectorXd y(40);
  for (int i = 0; i < 40; ++i) {
    X.row(i) << 1.0, i / 40.0, std::log1p(i), std::sin(i * 0.5), std::cos(i * 0.5);
    y(i) = 1.0 + std::sin(i * 0.5) + 0.01 * ((i * 7) % 5);
  }
  auto fit = aps::fit_ols(X, y);
  fit.amplitudes = {std::hypot(fit.coefficients(3), fit.coefficients(4))};
  std::ostringstream out;
  aps::write_coefficient_csv(out, fit);
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "k,A_k,beta,coef,std_err,t,p");
  CHECK(lines[1].starts_with("1,"));
  CHECK(lines[1].find(",beta_1_1,") != std::string::npos);
  CHECK(lines[2].find(",beta_2_1,") != std::string::npos);
}

TEST_CASE("SVG carries every data point") {
  aps::svg::Figure fig;
  fig.title = "t <&>";
  fig.series.push_back({"s", {1, 2, 3}, {0.5, 0.25, 0.125}, aps::svg::Style::points});
  fig.lines.push_back({0.3, "CL 0.9", true});
  const auto svg = aps::svg::render(fig);
  CHECK(svg.starts_with("<svg"));
  CHECK(svg.find("data-x=\"2\" data-y=\"0.25\"") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(svg.find("t &lt;&amp;&gt;") != std::string::npos);
}
