#include "aps/report_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace aps {

namespace {

nlohmann::json hint_json(const PeriodHint& h) {
  return {{"k", h.k},         {"period", h.period},       {"frequency", h.frequency},
          {"power", h.power}, {"threshold", h.threshold}, {"confidence", h.confidence}};
}

PeriodHint hint_from_json(const nlohmann::json& j) {
  PeriodHint h;
  h.k = j.at("k").get<std::size_t>();
  h.period = j.at("period").get<double>();
  h.frequency = j.at("frequency").get<double>();
  h.power = j.at("power").get<double>();
  h.threshold = j.at("threshold").get<double>();
  h.confidence = j.at("confidence").get<double>();
  return h;
}

nlohmann::json optional_json(std::optional<double> v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json stats_json(const std::optional<SummaryStats>& s) {
  if (!s) return nullptr;
  return {{"count", s->count}, {"mean", s->mean}, {"median", s->median}};
}

nlohmann::json histogram_json(const Histogram& h) {
  return {{"width", h.width}, {"edges", h.edges}, {"counts", h.counts}};
}

std::string fmt_opt(std::optional<double> v) { return v ? fmt::format("{}", *v) : "NA"; }

std::string fmt_points(std::optional<double> delta) {
  return delta ? fmt::format("{:.2f}", 100.0 * *delta) : "NA";
}

}  // namespace

nlohmann::json to_json(const DetectionResult& r) {
  nlohmann::json j;
  j["doc_id"] = r.doc_id;
  j["n"] = r.n;
  j["classification"] = std::string(to_string(r.classification));
  j["config"] = {{"seed", r.config.hints.seed},
                 {"confidence", r.config.hints.confidence},
                 {"permutations", r.config.hints.permutations},
                 {"backend", std::string(to_string(r.config.hints.backend))},
                 {"min_length", r.config.min_length},
                 {"delta_theta", r.config.filter.delta_theta}};
  j["threshold"] = r.threshold;
  auto& hints = j["hints"] = nlohmann::json::array();
  for (const auto& h : r.hints) hints.push_back(hint_json(h));
  auto& periods = j["periods"] = nlohmann::json::array();
  for (const auto& p : r.periods) {
    periods.push_back({{"period", p.refined_period},
                       {"hint", hint_json(p.source_hint)},
                       {"slope_left", p.slope_left},
                       {"slope_right", p.slope_right},
                       {"delta_theta", p.delta_theta},
                       {"window", {p.window.lo, p.window.hi}}});
  }
  j["too_short"] = r.too_short;
  j["diagnostics"] = r.diagnostics;
  j["error"] = r.error ? nlohmann::json(*r.error) : nlohmann::json(nullptr);
  return j;
}

DetectionResult detection_from_json(const nlohmann::json& j) {
  DetectionResult r;
  r.doc_id = j.at("doc_id").get<std::string>();
  r.n = j.at("n").get<std::size_t>();
  const auto cls = parse_classification(j.at("classification").get<std::string>());
  if (!cls) throw std::invalid_argument("unknown classification in result for " + r.doc_id);
  r.classification = *cls;
  const auto& c = j.at("config");
  r.config.hints.seed = c.at("seed").get<std::uint64_t>();
  r.config.hints.confidence = c.at("confidence").get<double>();
  r.config.hints.permutations = c.at("permutations").get<int>();
  const auto backend = parse_backend(c.at("backend").get<std::string>());
  if (!backend) throw std::invalid_argument("unknown backend in result for " + r.doc_id);
  r.config.hints.backend = *backend;
  r.config.min_length = c.at("min_length").get<std::size_t>();
  r.config.filter.delta_theta = c.at("delta_theta").get<double>();
  r.threshold = j.at("threshold").get<double>();
  for (const auto& h : j.at("hints")) r.hints.push_back(hint_from_json(h));
  for (const auto& p : j.at("periods")) {
    ValidatedPeriod vp;
    vp.refined_period = p.at("period").get<std::size_t>();
    vp.source_hint = hint_from_json(p.at("hint"));
    vp.slope_left = p.at("slope_left").get<double>();
    vp.slope_right = p.at("slope_right").get<double>();
    vp.delta_theta = p.at("delta_theta").get<double>();
    vp.window = {p.at("window").at(0).get<std::size_t>(), p.at("window").at(1).get<std::size_t>()};
    r.periods.push_back(vp);
  }
  r.too_short = j.value("too_short", false);
  if (j.contains("diagnostics")) r.diagnostics = j["diagnostics"].get<std::vector<std::string>>();
  if (j.contains("error") && !j["error"].is_null()) r.error = j["error"].get<std::string>();
  return r;
}

void write_results(std::span<const DetectionResult> results, const std::filesystem::path& path) {
  std::ostringstream out;
  for (const auto& r : results) out << to_json(r).dump() << '\n';
  write_text_file(path, out.str());
}

std::vector<DetectionResult> read_results(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open results '{}'", path.string()));
  std::vector<DetectionResult> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(detection_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error(
          fmt::format("{}: line {}: bad detection result: {}", path.string(), line_no, e.what()));
    }
  }
  return out;
}

std::string format_percent(std::optional<double> ratio) {
  return ratio ? fmt::format("{:.2f}%", 100.0 * *ratio) : "NA";
}

nlohmann::json to_json(const CorpusReport& r) {
  nlohmann::json j;
  j["sigma"] = r.sigma;
  j["p1"] = r.p1;
  j["p2"] = r.p2;
  j["p1_over_sigma"] = optional_json(r.p1_over_sigma);
  j["p2_over_p1"] = optional_json(r.p2_over_p1);
  j["p2_over_sigma"] = optional_json(r.p2_over_sigma);
  j["hint_lengths"] = stats_json(r.hint_lengths);
  j["period_lengths"] = stats_json(r.period_lengths);
  j["period_histogram"] = histogram_json(r.period_histogram);
  auto& units = j["unit_mean_lengths"] = nlohmann::json::object();
  for (const auto& [kind, mean] : r.unit_mean_lengths) units[std::string(to_string(kind))] = mean;
  j["errors"] = r.errors;
  return j;
}

void write_report_csv(std::ostream& out, const CorpusReport& r) {
  out << "metric,value,percent\n";
  out << "|Sigma|," << r.sigma << ",\n";
  out << "|P1|," << r.p1 << ",\n";
  out << "|P2|," << r.p2 << ",\n";
  out << "|P1|/|Sigma|," << fmt_opt(r.p1_over_sigma) << ',' << format_percent(r.p1_over_sigma) << '\n';
  out << "|P2|/|P1|," << fmt_opt(r.p2_over_p1) << ',' << format_percent(r.p2_over_p1) << '\n';
  out << "|P2|/|Sigma|," << fmt_opt(r.p2_over_sigma) << ',' << format_percent(r.p2_over_sigma) << '\n';
  const auto stat = [](const std::optional<SummaryStats>& s, bool mean) -> std::optional<double> {
    if (!s) return std::nullopt;
    return mean ? s->mean : s->median;
  };
  out << "P1 hint mean," << fmt_opt(stat(r.hint_lengths, true)) << ",\n";
  out << "P1 hint median," << fmt_opt(stat(r.hint_lengths, false)) << ",\n";
  out << "P2 period mean," << fmt_opt(stat(r.period_lengths, true)) << ",\n";
  out << "P2 period median," << fmt_opt(stat(r.period_lengths, false)) << ",\n";
  for (const auto& [kind, mean] : r.unit_mean_lengths)
    out << "unit mean " << to_string(kind) << ',' << fmt::format("{}", mean) << ",\n";
  out << "errors," << r.errors << ",\n";
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i)
    out << fmt::format("{},{},{}\n", h.edges[i], h.edges[i + 1], h.counts[i]);
}

nlohmann::json to_json(const UnitComparison& c) {
  nlohmann::json j;
  j["period_count"] = c.period_count;
  j["histogram"] = histogram_json(c.histogram);
  auto& units = j["units"] = nlohmann::json::object();
  for (const auto& [kind, mean] : c.unit_means)
    units[std::string(to_string(kind))] = {{"mean_length", mean},
                                           {"fraction_periods_above", c.fraction_above_unit_mean.at(kind)}};
  j["fraction_periods_above_100"] = c.fraction_above_100;
  return j;
}

void write_unit_comparison_csv(std::ostream& out, const UnitComparison& c) {
  out << "unit,mean_length,fraction_periods_above\n";
  for (const auto& [kind, mean] : c.unit_means)
    out << fmt::format("{},{},{}\n", to_string(kind), mean, c.fraction_above_unit_mean.at(kind));
  out << fmt::format("tokens>100,100,{}\n", c.fraction_above_100);
}

nlohmann::json to_json(const GroupComparison& g, const std::string& name_a,
                       const std::string& name_b) {
  nlohmann::json j;
  j["groups"] = {name_a, name_b};
  j["a"] = to_json(g.a);
  j["b"] = to_json(g.b);
  j["delta"] = {{"p1_over_sigma", optional_json(g.delta_p1_over_sigma)},
                {"p2_over_p1", optional_json(g.delta_p2_over_p1)},
                {"p2_over_sigma", optional_json(g.delta_p2_over_sigma)}};
  j["long_period_threshold"] = kLongPeriod;
  j["long_fraction"] = {g.long_fraction_a, g.long_fraction_b};
  j["histogram_a"] = histogram_json(g.histogram_a);
  j["histogram_b"] = histogram_json(g.histogram_b);
  return j;
}

void write_comparison_csv(std::ostream& out, const GroupComparison& g, const std::string& name_a,
                          const std::string& name_b) {
  out << fmt::format("metric,{},{},delta\n", name_a, name_b);
  out << fmt::format("|Sigma|,{},{},{}\n", g.a.sigma, g.b.sigma,
                     static_cast<long long>(g.b.sigma) - static_cast<long long>(g.a.sigma));
  out << fmt::format("|P1|,{},{},{}\n", g.a.p1, g.b.p1,
                     static_cast<long long>(g.b.p1) - static_cast<long long>(g.a.p1));
  out << fmt::format("|P2|,{},{},{}\n", g.a.p2, g.b.p2,
                     static_cast<long long>(g.b.p2) - static_cast<long long>(g.a.p2));
  out << fmt::format("|P1|/|Sigma|,{},{},{}\n", format_percent(g.a.p1_over_sigma),
                     format_percent(g.b.p1_over_sigma), fmt_points(g.delta_p1_over_sigma));
  out << fmt::format("|P2|/|P1|,{},{},{}\n", format_percent(g.a.p2_over_p1),
                     format_percent(g.b.p2_over_p1), fmt_points(g.delta_p2_over_p1));
  out << fmt::format("|P2|/|Sigma|,{},{},{}\n", format_percent(g.a.p2_over_sigma),
                     format_percent(g.b.p2_over_sigma), fmt_points(g.delta_p2_over_sigma));
  out << fmt::format("periods>{:g},{},{},{:.2f}\n", kLongPeriod, format_percent(g.long_fraction_a),
                     format_percent(g.long_fraction_b),
                     100.0 * (g.long_fraction_b - g.long_fraction_a));
}

void write_overlay_histogram_csv(std::ostream& out, const GroupComparison& g) {
  out << "bin_lo,bin_hi,count_a,count_b\n";
  for (std::size_t i = 0; i < g.histogram_a.counts.size(); ++i)
    out << fmt::format("{},{},{},{}\n", g.histogram_a.edges[i], g.histogram_a.edges[i + 1],
                       g.histogram_a.counts[i], g.histogram_b.counts[i]);
}

void write_coefficient_csv(std::ostream& out, const HRFit& fit) {
  out << "k,A_k,beta,coef,std_err,t,p\n";
  for (std::size_t k = 1; k <= fit.amplitudes.size(); ++k) {
    const int ki = static_cast<int>(k);
    for (int which = 1; which <= 2; ++which) {
      const auto idx = static_cast<Eigen::Index>(which == 1 ? fit.sin_index(ki) : fit.cos_index(ki));
      out << fmt::format("{},{},beta_{}_{},{},{},{},{}\n", k,
                         fit.amplitudes[k - 1], which, k, fit.coefficients(idx),
                         fit.std_errors(idx), fit.t_stats(idx), fit.p_values(idx));
    }
  }
}

void write_baseline_csv(std::ostream& out, const HRFit& fit) {
  out << "term,coef,std_err,t,p\n";
  for (std::size_t j = 0; j < kBaselineColumns && j < fit.columns.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    out << fmt::format("{},{},{},{},{}\n", fit.columns[j], fit.coefficients(i),
                       fit.std_errors(i), fit.t_stats(i), fit.p_values(i));
  }
}

void write_mse_csv(std::ostream& out, const MseTable& t) {
  out << "portion";
  for (const auto& d : t.designs) out << ',' << d;
  out << '\n';
  for (std::size_t p = 0; p < t.portions.size(); ++p) {
    out << to_string(t.portions[p]);
    for (const auto& cell : t.mse[p]) out << ',' << (cell ? fmt::format("{:.4f}", *cell) : "NA");
    out << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out << content;
  if (!out) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
}

}  // namespace aps
