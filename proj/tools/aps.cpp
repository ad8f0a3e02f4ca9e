// aps: command-line front end for the periodicity toolkit.
//
// Exit status: 0 success, 1 usage or I/O error, 2 some documents failed
// (they are listed on stderr and in PREFIX.errors.txt).

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "aps/analytics.hpp"
#include "aps/corpus.hpp"
#include "aps/harmonic_regression.hpp"
#include "aps/hints.hpp"
#include "aps/parallel.hpp"
#include "aps/report_io.hpp"
#include "aps/spectrum.hpp"
#include "aps/svg.hpp"
#include "aps/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDocErrors = 2;

// Detection flags shared by every subcommand that may run detection.
struct DetectFlags {
  double confidence = 0.90;
  int permutations = 100;
  std::uint64_t seed = 42;
  std::string backend = "lomb-scargle";
  std::size_t min_length = 32;
  double delta_theta = 0.01;
  int jobs = 0;

  aps::DetectionConfig config() const {
    aps::DetectionConfig cfg;
    cfg.hints.confidence = confidence;
    cfg.hints.permutations = permutations;
    cfg.hints.seed = seed;
    cfg.hints.backend = *aps::parse_backend(backend);
    cfg.min_length = min_length;
    cfg.filter.delta_theta = delta_theta;
    return cfg;
  }
};

const CLI::Validator kOpenUnit(
    [](std::string& s) -> std::string {
      double v = 0.0;
      try {
        v = std::stod(s);
      } catch (...) {
        return "not a number: " + s;
      }
      if (!(v > 0.0 && v < 1.0)) return "confidence must lie in (0, 1), got " + s;
      return {};
    },
    "(0,1)");

void add_detect_flags(CLI::App* app, DetectFlags& f) {
  app->add_option("--confidence", f.confidence, "Confidence level for the hint threshold")
      ->check(kOpenUnit)
      ->capture_default_str();
  app->add_option("--permutations", f.permutations, "Number of permutation runs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--seed", f.seed, "Run seed (env APS_SEED)")->envname("APS_SEED")->capture_default_str();
  app->add_option("--backend", f.backend, "Periodogram backend")
      ->check(CLI::IsMember({"classic", "lomb-scargle", "lomb_scargle"}))
      ->capture_default_str();
  app->add_option("--min-length", f.min_length, "Documents shorter than this are not analysed")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--delta-theta", f.delta_theta, "Hill test angle threshold")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app->add_option("--jobs", f.jobs, "Worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
}

json config_json(const aps::DetectionConfig& c) {
  return {{"seed", c.hints.seed},
          {"confidence", c.hints.confidence},
          {"permutations", c.hints.permutations},
          {"backend", std::string(aps::to_string(c.hints.backend))},
          {"min_length", c.min_length},
          {"delta_theta", c.filter.delta_theta}};
}

void warn_degenerate(const aps::HintConfig& cfg) {
  if (aps::threshold_is_degenerate(cfg))
    std::cerr << fmt::format(
        "warning: {} permutations at confidence {} leave no tail; the threshold is the largest "
        "recorded maximum\n",
        cfg.permutations, cfg.confidence);
}

std::string slurp_stream(const std::function<void(std::ostream&)>& fn) {
  std::ostringstream out;
  fn(out);
  return out.str();
}

fs::path with_suffix(const std::string& prefix, const std::string& suffix) {
  return fs::path(prefix + suffix);
}

void ensure_parent(const std::string& prefix) {
  const auto parent = fs::path(prefix).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

// First non-blank line decides: detection results carry "classification".
bool looks_like_results(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path.string()));
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      return j.is_object() && j.contains("classification");
    } catch (const json::parse_error&) {
      return false;  // let the corpus reader report it with a line number
    }
  }
  return false;
}

int report_doc_errors(const std::vector<aps::DetectionResult>& results, const std::string& prefix) {
  std::string listing;
  for (const auto& r : results)
    if (r.error) listing += fmt::format("{}\t{}\n", r.doc_id, *r.error);
  if (listing.empty()) return kExitOk;
  aps::write_text_file(with_suffix(prefix, ".errors.txt"), listing);
  std::cerr << "documents that failed:\n" << listing;
  return kExitDocErrors;
}

std::vector<aps::DetectionResult> run_detection(const std::vector<aps::SurprisalDocument>& docs,
                                                const DetectFlags& f) {
  const auto cfg = f.config();
  warn_degenerate(cfg.hints);
  return aps::detect_corpus(docs, cfg);
}

aps::svg::Figure histogram_figure(const aps::Histogram& h, const std::string& title) {
  aps::svg::Figure fig;
  fig.title = title;
  fig.x_label = "period (tokens)";
  fig.y_label = "count";
  aps::svg::Series s;
  s.name = "periods";
  s.style = aps::svg::Style::bars;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    s.x.push_back(h.edges[i]);
    s.y.push_back(static_cast<double>(h.counts[i]));
  }
  fig.series.push_back(std::move(s));
  return fig;
}

// ---------------------------------------------------------------- detect

struct DetectArgs {
  std::string corpus;
  std::string out = "aps";
  DetectFlags flags;
};

int cmd_detect(const DetectArgs& a) {
  const auto docs = aps::read_corpus(a.corpus);
  ensure_parent(a.out);
  const auto results = run_detection(docs, a.flags);
  aps::write_results(results, with_suffix(a.out, ".results.jsonl"));

  const auto summary = aps::partition_corpus(results, docs);
  json report;
  report["config"] = config_json(a.flags.config());
  report["report"] = aps::to_json(summary.report);
  bool annotated = false;
  for (const auto& d : docs) annotated = annotated || !d.units.empty();
  if (annotated) {
    const auto units = aps::period_unit_comparison(results, docs);
    report["units"] = aps::to_json(units);
    aps::write_text_file(with_suffix(a.out, ".units.csv"),
                         slurp_stream([&](std::ostream& o) { aps::write_unit_comparison_csv(o, units); }));
  }
  aps::write_text_file(with_suffix(a.out, ".report.json"), report.dump(2) + "\n");
  aps::write_text_file(with_suffix(a.out, ".report.csv"),
                       slurp_stream([&](std::ostream& o) { aps::write_report_csv(o, summary.report); }));
  aps::write_text_file(with_suffix(a.out, ".histogram.csv"), slurp_stream([&](std::ostream& o) {
                         aps::write_histogram_csv(o, summary.report.period_histogram);
                       }));
  aps::write_text_file(with_suffix(a.out, ".histogram.svg"),
                       aps::svg::render(histogram_figure(summary.report.period_histogram,
                                                         "Refined period lengths")));
  std::cout << fmt::format("{} documents: |P1|={} |P2|={} ({} of corpus periodic)\n",
                           summary.report.sigma, summary.report.p1, summary.report.p2,
                           aps::format_percent(summary.report.p2_over_sigma));
  return report_doc_errors(results, a.out);
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  aps::SynthSpec spec;
  std::string out = "synth.jsonl";
  std::string manifest;
  std::string unit_kind = "sentence";
  std::size_t unit_length = 0;
  double phase = 0.0;
  bool fixed_phase = false;
};

int cmd_synth(SynthArgs a) {
  if (a.fixed_phase) a.spec.phase = a.phase;
  if (a.unit_length > 0) {
    a.spec.unit_length = a.unit_length;
    a.spec.unit_kind = *aps::parse_unit_kind(a.unit_kind);
  }
  const auto corpus = aps::generate(a.spec);
  ensure_parent(a.out);
  aps::write_corpus(corpus.docs, a.out);
  const auto manifest_path = a.manifest.empty() ? a.out + ".manifest.json" : a.manifest;
  const auto manifest = aps::manifest_json(a.spec, corpus);
  aps::write_text_file(manifest_path, manifest.dump(2) + "\n");
  std::cout << fmt::format("wrote {} documents ({} periodic) to {}\n", corpus.docs.size(),
                           manifest["periodic_count"].get<std::size_t>(), a.out);
  return kExitOk;
}

// ---------------------------------------------------------------- hr

struct HrArgs {
  std::string corpus;
  std::string results;
  std::string out = "aps";
  std::string scaler = "aps_period";
  std::vector<std::string> scalers;
  int K = 10;
  std::string portion = "P2";
  bool mse_table = false;
  DetectFlags flags;
};

std::vector<aps::DetectionResult> results_for(const std::vector<aps::SurprisalDocument>& docs,
                                              const std::string& path, const DetectFlags& f) {
  if (!path.empty()) return aps::read_results(path);
  return run_detection(docs, f);
}

int cmd_hr(const HrArgs& a) {
  const auto docs = aps::read_corpus(a.corpus);
  ensure_parent(a.out);
  const auto results = results_for(docs, a.results, a.flags);
  const auto partition = aps::partition_corpus(results).partition;

  if (a.mse_table) {
    std::vector<aps::HRDesign> designs{{a.K, aps::Scaler::document, true}};
    for (const auto& name : a.scalers) designs.push_back({a.K, *aps::parse_scaler(name), false});
    const auto table = aps::evaluate_mse_by_partition(docs, results, partition, designs);
    aps::write_text_file(with_suffix(a.out, ".mse.csv"),
                         slurp_stream([&](std::ostream& o) { aps::write_mse_csv(o, table); }));
    for (const auto& note : table.notes) std::cerr << "NA " << note << '\n';
    std::cout << std::string(aps::kBaselineDescription) << '\n';
    return kExitOk;
  }

  const aps::HRDesign design{a.K, *aps::parse_scaler(a.scaler), false};
  const auto portion = *aps::parse_portion(a.portion);
  const auto subset = aps::select_portion(docs, partition, portion);
  if (subset.empty())
    throw std::runtime_error(fmt::format("portion {} is empty", aps::to_string(portion)));
  const auto dm = aps::build_design_matrix(subset, results, design);
  for (const auto& w : dm.warnings) std::cerr << "warning: " << w << '\n';
  const auto fit = aps::fit_design(dm);
  aps::write_text_file(with_suffix(a.out, ".coefficients.csv"),
                       slurp_stream([&](std::ostream& o) { aps::write_coefficient_csv(o, fit); }));
  aps::write_text_file(with_suffix(a.out, ".baseline.csv"),
                       slurp_stream([&](std::ostream& o) { aps::write_baseline_csv(o, fit); }));
  json j;
  j["design"] = aps::label(design);
  j["portion"] = std::string(aps::to_string(portion));
  j["documents"] = subset.size();
  j["observations"] = fit.observations;
  j["mse"] = fit.mse;
  j["amplitudes"] = fit.amplitudes;
  j["baseline"] = std::string(aps::kBaselineDescription);
  aps::write_text_file(with_suffix(a.out, ".hr.json"), j.dump(2) + "\n");
  std::cout << fmt::format("{} on {}: {} tokens, MSE {:.4f}, A_1 {:.4f}\n", aps::label(design),
                           aps::to_string(portion), fit.observations, fit.mse,
                           fit.amplitudes.empty() ? 0.0 : fit.amplitudes[0]);
  return kExitOk;
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
  std::string a;
  std::string b;
  std::string name_a = "A";
  std::string name_b = "B";
  std::string out = "aps";
  DetectFlags flags;
};

std::vector<aps::DetectionResult> load_group(const std::string& path, const DetectFlags& f) {
  if (looks_like_results(path)) return aps::read_results(path);
  return run_detection(aps::read_corpus(path), f);
}

int cmd_compare(const CompareArgs& a) {
  const auto ra = load_group(a.a, a.flags);
  const auto rb = load_group(a.b, a.flags);
  ensure_parent(a.out);
  const auto g = aps::compare_groups(ra, rb);
  aps::write_text_file(with_suffix(a.out, ".compare.csv"), slurp_stream([&](std::ostream& o) {
                         aps::write_comparison_csv(o, g, a.name_a, a.name_b);
                       }));
  aps::write_text_file(with_suffix(a.out, ".compare.json"),
                       aps::to_json(g, a.name_a, a.name_b).dump(2) + "\n");
  aps::write_text_file(with_suffix(a.out, ".overlay.csv"),
                       slurp_stream([&](std::ostream& o) { aps::write_overlay_histogram_csv(o, g); }));

  aps::svg::Figure fig = histogram_figure(g.histogram_a, "Period distributions");
  fig.series[0].name = a.name_a;
  auto sb = histogram_figure(g.histogram_b, "").series[0];
  sb.name = a.name_b;
  sb.color = "#d62728";
  fig.series.push_back(std::move(sb));
  fig.lines.push_back({aps::kLongPeriod, "long periods", false});
  aps::write_text_file(with_suffix(a.out, ".overlay.svg"), aps::svg::render(fig));

  std::vector<aps::DetectionResult> all = ra;
  all.insert(all.end(), rb.begin(), rb.end());
  std::cout << fmt::format("{}: {} periodic, {}: {} periodic\n", a.name_a,
                           aps::format_percent(g.a.p2_over_sigma), a.name_b,
                           aps::format_percent(g.b.p2_over_sigma));
  return report_doc_errors(all, a.out);
}

// ---------------------------------------------------------------- plot

struct PlotArgs {
  std::string kind = "periodogram";
  std::string input;
  std::string doc;
  std::string corpus;
  std::string out = "aps";
  std::vector<double> levels{0.50, 0.90, 0.99};
  DetectFlags flags;
};

const aps::SurprisalDocument& find_doc(const std::vector<aps::SurprisalDocument>& docs,
                                       const std::string& id) {
  if (docs.empty()) throw std::runtime_error("corpus is empty");
  if (id.empty()) return docs.front();
  for (const auto& d : docs)
    if (d.doc_id == id) return d;
  throw std::runtime_error(fmt::format("no document '{}' in corpus", id));
}

int plot_periodogram(const PlotArgs& a) {
  const auto docs = aps::read_corpus(a.input);
  const auto& doc = find_doc(docs, a.doc);
  auto cfg = a.flags.config();
  cfg.hints.seed = aps::document_seed(cfg.hints.seed, doc.doc_id);
  const auto pg = aps::periodogram(doc.values, cfg.hints.backend);
  // One set of permutation maxima serves every level.
  const auto maxima = aps::permutation_max_powers(doc.values, cfg.hints);

  std::string csv = "k,frequency,period,power\n";
  aps::svg::Figure fig;
  fig.title = fmt::format("Periodogram of {}", doc.doc_id);
  fig.x_label = "frequency";
  fig.y_label = "power";
  aps::svg::Series s;
  s.name = "power";
  for (std::size_t k = 1; k <= pg.size(); ++k) {
    csv += fmt::format("{},{},{},{}\n", k, pg.frequency(k), pg.period(k), pg.power(k));
    s.x.push_back(pg.frequency(k));
    s.y.push_back(pg.power(k));
  }
  fig.series.push_back(std::move(s));
  std::string thresholds = "confidence,threshold,hints\n";
  for (double level : a.levels) {
    auto hc = cfg.hints;
    hc.confidence = level;
    warn_degenerate(hc);
    const double t = aps::threshold_from_max_powers(maxima, hc);
    const auto hints = aps::hints_above(pg, t, level);
    thresholds += fmt::format("{},{},{}\n", level, t, hints.size());
    fig.lines.push_back({t, fmt::format("CL {}", level), true});
  }
  aps::write_text_file(with_suffix(a.out, ".periodogram.csv"), csv);
  aps::write_text_file(with_suffix(a.out, ".thresholds.csv"), thresholds);
  aps::write_text_file(with_suffix(a.out, ".periodogram.svg"), aps::svg::render(fig));
  return kExitOk;
}

int plot_acf(const PlotArgs& a) {
  const auto docs = aps::read_corpus(a.input);
  const auto& doc = find_doc(docs, a.doc);
  auto cfg = a.flags.config();
  cfg.hints.seed = aps::document_seed(cfg.hints.seed, doc.doc_id);
  warn_degenerate(cfg.hints);
  const auto result = aps::detect_document(doc, cfg);
  const auto curve = aps::acf(doc.values);

  std::string csv = "lag,acf\n";
  aps::svg::Figure fig;
  fig.title = fmt::format("ACF of {}", doc.doc_id);
  fig.x_label = "lag";
  fig.y_label = "acf";
  aps::svg::Series s;
  s.name = "acf";
  for (std::size_t lag = 0; lag < curve.values.size(); ++lag) {
    csv += fmt::format("{},{}\n", lag, curve[lag]);
    s.x.push_back(static_cast<double>(lag));
    s.y.push_back(curve[lag]);
  }
  fig.series.push_back(std::move(s));
  std::string marks = "period,hint_period,window_lo,window_hi,slope_left,slope_right,delta_theta\n";
  for (const auto& p : result.periods) {
    marks += fmt::format("{},{},{},{},{},{},{}\n", p.refined_period, p.source_hint.period,
                         p.window.lo, p.window.hi, p.slope_left, p.slope_right, p.delta_theta);
    fig.lines.push_back({static_cast<double>(p.refined_period),
                         fmt::format("period {}", p.refined_period), false, "#d62728"});
  }
  aps::write_text_file(with_suffix(a.out, ".acf.csv"), csv);
  aps::write_text_file(with_suffix(a.out, ".periods.csv"), marks);
  aps::write_text_file(with_suffix(a.out, ".acf.svg"), aps::svg::render(fig));
  return kExitOk;
}

int plot_histogram(const PlotArgs& a) {
  std::vector<aps::DetectionResult> results;
  std::vector<aps::SurprisalDocument> docs;
  if (looks_like_results(a.input)) {
    results = aps::read_results(a.input);
    if (!a.corpus.empty()) docs = aps::read_corpus(a.corpus);
  } else {
    docs = aps::read_corpus(a.input);
    results = run_detection(docs, a.flags);
  }
  const auto summary = aps::partition_corpus(results, docs);
  auto fig = histogram_figure(summary.report.period_histogram, "Refined period lengths");
  for (const auto& [kind, mean] : summary.report.unit_mean_lengths)
    fig.lines.push_back({mean, fmt::format("{} mean", aps::to_string(kind)), false, "#2ca02c"});
  std::string means = "unit,mean_length\n";
  for (const auto& [kind, mean] : summary.report.unit_mean_lengths)
    means += fmt::format("{},{}\n", aps::to_string(kind), mean);
  aps::write_text_file(with_suffix(a.out, ".histogram.csv"), slurp_stream([&](std::ostream& o) {
                         aps::write_histogram_csv(o, summary.report.period_histogram);
                       }));
  aps::write_text_file(with_suffix(a.out, ".unit_means.csv"), means);
  aps::write_text_file(with_suffix(a.out, ".histogram.svg"), aps::svg::render(fig));
  return report_doc_errors(results, a.out);
}

int cmd_plot(const PlotArgs& a) {
  ensure_parent(a.out);
  if (a.kind == "periodogram") return plot_periodogram(a);
  if (a.kind == "acf") return plot_acf(a);
  return plot_histogram(a);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodicity detection in per-token surprisal sequences"};
  app.require_subcommand(1);

  DetectArgs detect;
  auto* d = app.add_subcommand("detect", "Detect periods in every document of a corpus");
  d->add_option("corpus", detect.corpus, "Surprisal corpus (JSONL)")->required()->check(CLI::ExistingFile);
  d->add_option("-o,--out", detect.out, "Output prefix")->capture_default_str();
  add_detect_flags(d, detect.flags);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic corpus with planted periods");
  s->add_option("--docs", synth.spec.n_docs, "Number of documents")->capture_default_str();
  s->add_option("--length", synth.spec.length, "Tokens per document")->capture_default_str();
  s->add_option("--period", synth.spec.periods, "Planted period(s)")->capture_default_str();
  s->add_option("--amp", synth.spec.amplitudes, "Amplitude(s)")->capture_default_str();
  s->add_option("--sigma", synth.spec.noise_sigma, "Gaussian noise sigma")->capture_default_str();
  s->add_option("--mean", synth.spec.mean, "Mean surprisal")->capture_default_str();
  s->add_option("--fraction", synth.spec.fraction_periodic, "Share of periodic documents")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  s->add_option("--seed", synth.spec.seed, "Generator seed (env APS_SEED)")
      ->envname("APS_SEED")
      ->capture_default_str();
  s->add_flag("--match-variance", synth.spec.match_variance,
              "Give noise documents the marginal variance of periodic ones");
  s->add_option("--phase", synth.phase, "Fixed phase (radians) instead of a random one per document")
      ->each([&](const std::string&) { synth.fixed_phase = true; });
  s->add_option("--unit-length", synth.unit_length, "Annotate units of this many tokens");
  s->add_option("--unit-kind", synth.unit_kind, "Kind of the annotated units")
      ->check(CLI::IsMember({"edu", "sentence", "paragraph", "document"}));
  s->add_option("--id-prefix", synth.spec.id_prefix, "doc_id prefix");
  s->add_option("-o,--out", synth.out, "Corpus path")->capture_default_str();
  s->add_option("--manifest", synth.manifest, "Manifest path (default OUT.manifest.json)");

  HrArgs hr;
  auto* h = app.add_subcommand("hr", "Harmonic regression of surprisal on relative position");
  h->add_option("corpus", hr.corpus, "Surprisal corpus (JSONL)")->required()->check(CLI::ExistingFile);
  h->add_option("--results", hr.results, "Detection results; detected on the fly when absent")
      ->check(CLI::ExistingFile);
  h->add_option("-o,--out", hr.out, "Output prefix")->capture_default_str();
  const auto scaler_names = CLI::IsMember({"edu", "sentence", "paragraph", "document", "aps_hint", "aps_period"});
  h->add_option("--scaler", hr.scaler, "Period source for the harmonics")
      ->check(scaler_names)
      ->capture_default_str();
  h->add_option("--K", hr.K, "Number of harmonics")->check(CLI::PositiveNumber)->capture_default_str();
  h->add_option("--portion", hr.portion, "Data portion: P2, P1, Sigma, Sigma-P1")
      ->check(CLI::IsMember({"P2", "P1", "Sigma", "Sigma-P1"}))
      ->capture_default_str();
  h->add_flag("--mse-table", hr.mse_table, "Tabulate MSE of every scaler on every portion");
  h->add_option("--scalers", hr.scalers, "Scalers for --mse-table")
      ->check(scaler_names)
      ->default_val(std::vector<std::string>{"document", "aps_hint", "aps_period"});
  add_detect_flags(h, hr.flags);

  CompareArgs cmp;
  auto* c = app.add_subcommand("compare", "Compare two groups (results or corpora)");
  c->add_option("a", cmp.a, "First group")->required()->check(CLI::ExistingFile);
  c->add_option("b", cmp.b, "Second group")->required()->check(CLI::ExistingFile);
  c->add_option("--name-a", cmp.name_a, "Label of the first group")->capture_default_str();
  c->add_option("--name-b", cmp.name_b, "Label of the second group")->capture_default_str();
  c->add_option("-o,--out", cmp.out, "Output prefix")->capture_default_str();
  add_detect_flags(c, cmp.flags);

  PlotArgs plot;
  auto* p = app.add_subcommand("plot", "Write CSV + SVG for a periodogram, ACF or period histogram");
  p->add_option("--kind", plot.kind, "periodogram, acf or histogram")
      ->check(CLI::IsMember({"periodogram", "acf", "histogram"}))
      ->capture_default_str();
  p->add_option("input", plot.input, "Corpus, or detection results for --kind histogram")
      ->required()
      ->check(CLI::ExistingFile);
  p->add_option("--doc", plot.doc, "doc_id to plot (default: first document)");
  p->add_option("--corpus", plot.corpus, "Corpus for unit means when input holds results")
      ->check(CLI::ExistingFile);
  p->add_option("--levels", plot.levels, "Confidence levels drawn as thresholds")
      ->check(kOpenUnit)
      ->capture_default_str();
  p->add_option("-o,--out", plot.out, "Output prefix")->capture_default_str();
  add_detect_flags(p, plot.flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    for (const DetectFlags* f : {&detect.flags, &hr.flags, &cmp.flags, &plot.flags})
      if (f->jobs > 0) aps::set_thread_count(f->jobs);
    if (*d) return cmd_detect(detect);
    if (*s) return cmd_synth(synth);
    if (*h) return cmd_hr(hr);
    if (*c) return cmd_compare(cmp);
    if (*p) return cmd_plot(plot);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
