#include "aps/hints.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "aps/parallel.hpp"
#include "aps/rng.hpp"

namespace aps {

namespace {

double permuted_max_power(std::span<const double> x, const HintConfig& cfg, std::size_t run) {
  std::vector<double> shuffled(x.begin(), x.end());
  std::mt19937_64 gen(derive_seed(cfg.seed, run));
  shuffle(shuffled, gen);
  return periodogram(shuffled, cfg.backend).max_power();
}

void check_length(std::span<const double> x) {
  if (x.size() < kMinPeriodogramLength)
    throw std::invalid_argument(
        fmt::format("hint extraction needs at least {} values, got {}", kMinPeriodogramLength,
                    x.size()));
}

}  // namespace

void validate(const HintConfig& cfg) {
  if (cfg.permutations < 1)
    throw std::invalid_argument(fmt::format("permutations must be >= 1, got {}", cfg.permutations));
  if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0))
    throw std::invalid_argument(fmt::format("confidence must lie in (0, 1), got {}", cfg.confidence));
}

bool threshold_is_degenerate(const HintConfig& cfg) {
  return static_cast<double>(cfg.permutations) * (1.0 - cfg.confidence) < 1.0 - 1e-9;
}

std::size_t threshold_index(const HintConfig& cfg) {
  const auto m = static_cast<std::size_t>(cfg.permutations);
  // The epsilon absorbs products such as 100 * 0.29 = 28.999999999999996.
  const auto idx =
      static_cast<std::size_t>(std::floor(static_cast<double>(m) * cfg.confidence + 1e-9));
  return std::min(idx, m - 1);
}

std::vector<double> permutation_max_powers(std::span<const double> x, const HintConfig& cfg) {
  validate(cfg);
  check_length(x);
  const auto m = static_cast<std::size_t>(cfg.permutations);
  std::vector<double> out(m);
  const bool nested = omp_in_parallel() != 0;
  APS_OMP_PRAGMA("omp parallel for schedule(static) if(!nested)")
  for (std::size_t i = 0; i < m; ++i) out[i] = permuted_max_power(x, cfg, i);
  return out;
}

std::vector<double> permutation_max_powers_serial(std::span<const double> x,
                                                  const HintConfig& cfg) {
  validate(cfg);
  check_length(x);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(cfg.permutations));
  for (std::size_t i = 0; i < static_cast<std::size_t>(cfg.permutations); ++i)
    out.push_back(permuted_max_power(x, cfg, i));
  return out;
}

double threshold_from_max_powers(std::vector<double> max_powers, const HintConfig& cfg) {
  validate(cfg);
  if (max_powers.size() != static_cast<std::size_t>(cfg.permutations))
    throw std::invalid_argument("max-power list length differs from the permutation count");
  std::sort(max_powers.begin(), max_powers.end());
  return max_powers[threshold_index(cfg)];
}

double permutation_threshold(std::span<const double> x, const HintConfig& cfg) {
  return threshold_from_max_powers(permutation_max_powers(x, cfg), cfg);
}

std::vector<PeriodHint> hints_above(const Periodogram& pg, double threshold, double confidence) {
  std::vector<PeriodHint> hints;
  for (std::size_t k = 1; k <= pg.size(); ++k) {
    const double p = pg.power(k);
    if (p > threshold)
      hints.push_back({k, pg.period(k), pg.frequency(k), p, threshold, confidence});
  }
  return hints;
}

std::vector<PeriodHint> get_period_hints(std::span<const double> x, const HintConfig& cfg) {
  const double threshold = permutation_threshold(x, cfg);
  return hints_above(periodogram(x, cfg.backend), threshold, cfg.confidence);
}

}  // namespace aps
