#include "aps/synth.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "aps/rng.hpp"

namespace aps {

void validate(const SynthSpec& spec) {
  if (spec.length < 4) throw std::invalid_argument("document length must be >= 4");
  if (spec.periods.empty()) throw std::invalid_argument("at least one period is required");
  const double max_period = static_cast<double>(spec.length) / 2.0;
  for (double p : spec.periods)
    if (!(p >= 2.0 && p <= max_period))
      throw std::invalid_argument(fmt::format("period {} outside [2, {}]", p, max_period));
  if (spec.amplitudes.size() != 1 && spec.amplitudes.size() != spec.periods.size())
    throw std::invalid_argument("give one amplitude, or one per period");
  if (!(spec.fraction_periodic >= 0.0 && spec.fraction_periodic <= 1.0))
    throw std::invalid_argument(fmt::format("fraction {} outside [0, 1]", spec.fraction_periodic));
  if (!(spec.noise_sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
  if (spec.unit_length && *spec.unit_length < 1) throw std::invalid_argument("unit length must be >= 1");
}

SynthCorpus generate(const SynthSpec& spec) {
  validate(spec);
  const std::size_t planted =
      static_cast<std::size_t>(std::llround(spec.fraction_periodic * static_cast<double>(spec.n_docs)));
  std::vector<double> order(spec.n_docs);
  std::iota(order.begin(), order.end(), 0.0);
  std::mt19937_64 pick(derive_seed(spec.seed, 0xfeedULL));
  shuffle(order, pick);
  std::vector<bool> periodic(spec.n_docs, false);
  for (std::size_t i = 0; i < planted; ++i) periodic[static_cast<std::size_t>(order[i])] = true;

  std::vector<double> amps(spec.periods.size());
  for (std::size_t i = 0; i < amps.size(); ++i)
    amps[i] = spec.amplitudes.size() == 1 ? spec.amplitudes[0] : spec.amplitudes[i];
  double signal_var = 0.0;
  for (double a : amps) signal_var += 0.5 * a * a;
  const double flat_sigma = spec.match_variance
                                ? std::sqrt(spec.noise_sigma * spec.noise_sigma + signal_var)
                                : spec.noise_sigma;

  const int width = static_cast<int>(std::to_string(std::max<std::size_t>(spec.n_docs, 1) - 1).size());
  SynthCorpus out;
  for (std::size_t d = 0; d < spec.n_docs; ++d) {
    std::mt19937_64 gen(derive_seed(spec.seed, d));
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    PlantedTruth truth;
    truth.doc_id = fmt::format("{}-{:0{}}", spec.id_prefix, d, std::max(width, 4));
    truth.periodic = periodic[d];
    if (truth.periodic) {
      truth.periods = spec.periods;
      truth.amplitudes = amps;
      for (std::size_t i = 0; i < amps.size(); ++i)
        truth.phases.push_back(spec.phase ? *spec.phase : phase(gen));
    }
    const double sigma = truth.periodic ? spec.noise_sigma : flat_sigma;
    std::normal_distribution<double> noise(0.0, sigma > 0.0 ? sigma : 1.0);
    SurprisalDocument doc;
    doc.doc_id = truth.doc_id;
    doc.values.resize(spec.length);
    for (std::size_t n = 0; n < spec.length; ++n) {
      double v = spec.mean;
      for (std::size_t i = 0; i < truth.periods.size(); ++i)
        v += truth.amplitudes[i] *
             std::sin(2.0 * std::numbers::pi * static_cast<double>(n) / truth.periods[i] +
                      truth.phases[i]);
      doc.values[n] = sigma > 0.0 ? v + noise(gen) : v;
    }
    if (spec.unit_length) {
      std::vector<std::size_t> bounds;
      for (std::size_t b = *spec.unit_length; b < spec.length; b += *spec.unit_length) bounds.push_back(b);
      bounds.push_back(spec.length);
      doc.units[spec.unit_kind] = std::move(bounds);
    }
    out.docs.push_back(std::move(doc));
    out.truth.push_back(std::move(truth));
  }
  return out;
}

nlohmann::json manifest_json(const SynthSpec& spec, const SynthCorpus& corpus) {
  nlohmann::json j;
  j["seed"] = spec.seed;
  j["n_docs"] = spec.n_docs;
  j["length"] = spec.length;
  j["periods"] = spec.periods;
  j["amplitudes"] = spec.amplitudes;
  j["noise_sigma"] = spec.noise_sigma;
  j["mean"] = spec.mean;
  j["fraction_periodic"] = spec.fraction_periodic;
  j["match_variance"] = spec.match_variance;
  j["phase"] = spec.phase ? nlohmann::json(*spec.phase) : nlohmann::json(nullptr);
  std::size_t count = 0;
  auto& docs = j["docs"] = nlohmann::json::array();
  for (const auto& t : corpus.truth) {
    if (t.periodic) ++count;
    docs.push_back({{"doc_id", t.doc_id},
                    {"periodic", t.periodic},
                    {"periods", t.periods},
                    {"amplitudes", t.amplitudes},
                    {"phases", t.phases}});
  }
  j["periodic_count"] = count;
  return j;
}

}  // namespace aps
