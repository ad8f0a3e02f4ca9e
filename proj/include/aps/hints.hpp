#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "aps/spectrum.hpp"

namespace aps {

struct HintConfig {
  int permutations = 100;
  double confidence = 0.90;
  std::uint64_t seed = 42;
  Backend backend = Backend::lomb_scargle;
};

/// Throws std::invalid_argument when permutations < 1 or confidence is
/// outside (0, 1).
void validate(const HintConfig& cfg);

/// True when m * (1 - confidence) < 1, i.e. the threshold can only be the
/// largest recorded maximum. Callers should warn.
bool threshold_is_degenerate(const HintConfig& cfg);

/// 0-based position in the sorted max-power list that serves as threshold:
/// floor(m * confidence), clamped to m - 1.
std::size_t threshold_index(const HintConfig& cfg);

/// A candidate period N/k whose power beats the permutation threshold.
struct PeriodHint {
  std::size_t k = 0;
  double period = 0.0;
  double frequency = 0.0;
  double power = 0.0;
  double threshold = 0.0;
  double confidence = 0.0;

  bool operator==(const PeriodHint&) const = default;
};

/// Maximum periodogram power of each of the m seeded permutations of x, in
/// run order. Permutation i is driven by derive_seed(cfg.seed, i), so the
/// list does not depend on how runs are scheduled. Runs are spread over
/// OpenMP threads unless called from inside a parallel region.
std::vector<double> permutation_max_powers(std::span<const double> x, const HintConfig& cfg);

/// Serial reference for permutation_max_powers; same output, one thread.
std::vector<double> permutation_max_powers_serial(std::span<const double> x,
                                                  const HintConfig& cfg);

/// Sorted-max-power threshold at cfg.confidence. Throws for n < 4.
double permutation_threshold(std::span<const double> x, const HintConfig& cfg);

/// Picks the threshold out of an unsorted list of max powers.
double threshold_from_max_powers(std::vector<double> max_powers, const HintConfig& cfg);

/// Hints whose power strictly exceeds `threshold`, ascending in k.
std::vector<PeriodHint> hints_above(const Periodogram& pg, double threshold, double confidence);

/// Permutation threshold plus extraction, ascending in k (descending period).
std::vector<PeriodHint> get_period_hints(std::span<const double> x, const HintConfig& cfg);

}  // namespace aps
