#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aps/corpus.hpp"

namespace aps {

/// Synthetic surprisal corpus with planted sinusoids:
///   x_n = sum_i a_i sin(2 pi n / T_i + phi_i) + mean + N(0, sigma^2)
/// on a `fraction_periodic` share of the documents; the rest are noise.
struct SynthSpec {
  std::size_t n_docs = 100;
  std::size_t length = 500;
  std::vector<double> periods{50.0};
  std::vector<double> amplitudes{1.0};  // one per period, or a single value for all
  double noise_sigma = 0.3;
  double mean = 5.0;
  double fraction_periodic = 1.0;
  std::uint64_t seed = 42;
  /// Give noise-only documents sigma' = sqrt(sigma^2 + sum a_i^2 / 2), the
  /// marginal variance of a periodic document.
  bool match_variance = false;
  /// Same phase for every planted component of every document; drawn
  /// uniformly per document when unset.
  std::optional<double> phase;
  /// Annotate units of this length (the last one may be shorter).
  std::optional<std::size_t> unit_length;
  UnitKind unit_kind = UnitKind::sentence;
  std::string id_prefix = "synth";
};

/// Throws std::invalid_argument unless periods lie in [2, length/2],
/// amplitudes match, and fraction_periodic is in [0, 1].
void validate(const SynthSpec& spec);

struct PlantedTruth {
  std::string doc_id;
  bool periodic = false;
  std::vector<double> periods;
  std::vector<double> amplitudes;
  std::vector<double> phases;
};

struct SynthCorpus {
  std::vector<SurprisalDocument> docs;
  std::vector<PlantedTruth> truth;
};

/// Deterministic in spec.seed. round(fraction * n_docs) documents, chosen by
/// a seeded shuffle, carry the planted components.
SynthCorpus generate(const SynthSpec& spec);

nlohmann::json manifest_json(const SynthSpec& spec, const SynthCorpus& corpus);

}  // namespace aps
