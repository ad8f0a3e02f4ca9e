#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aps/hints.hpp"
#include "aps/spectrum.hpp"

namespace aps {

/// Closed lag interval [lo, hi].
struct LagWindow {
  std::size_t lo = 0;
  std::size_t hi = 0;

  std::size_t length() const noexcept { return hi >= lo ? hi - lo + 1 : 0; }
  bool contains(std::size_t lag) const noexcept { return lag >= lo && lag <= hi; }
  bool operator==(const LagWindow&) const = default;
};

/// Smallest window fit_split accepts: both halves share the split lag, so
/// three lags give each side two points.
constexpr std::size_t kMinSplitWindow = 3;

/// Search window for hint index k of a length-n sequence:
/// [ceil((tau + tau_next)/2 - 1), floor((tau + tau_prev)/2 + 1)] with
/// tau = n/k, tau_next = n/(k+1), tau_prev = n/(k-1) (n when k = 1),
/// intersected with [2, n-2]. The result may be empty (lo > hi).
/// Throws std::invalid_argument for n < 4 or k outside [1, ceil((n-1)/2)].
LagWindow search_window(std::size_t n, std::size_t k);

struct SplitFit {
  std::size_t t_best = 0;
  double slope_left = 0.0;
  double slope_right = 0.0;
  double sse = 0.0;  // left + right residual sum of squares at t_best
};

/// Two-segment least-squares split of the ACF over `window`. Every interior
/// lag t is tried; lines are fit to [lo, t] and [t, hi] and the split with
/// the smallest summed SSE wins, ties going to the smaller t. Throws
/// std::invalid_argument if the window is shorter than kMinSplitWindow or
/// does not fit inside the curve.
SplitFit fit_split(const AcfCurve& acf, LagWindow window);

/// Normalized slope angle: atan(slope) / (pi/2), in (-1, 1).
double slope_angle(double slope);

struct FilterConfig {
  double delta_theta = 0.01;
};

struct ValidatedPeriod {
  PeriodHint source_hint;
  std::size_t refined_period = 0;
  double slope_left = 0.0;
  double slope_right = 0.0;
  double delta_theta = 0.0;
  LagWindow window;

  bool operator==(const ValidatedPeriod&) const = default;
};

struct FilterOutcome {
  std::vector<ValidatedPeriod> periods;  // descending refined_period
  std::vector<std::string> diagnostics;  // one line per dropped hint
};

/// Hill test on each hint against the ACF of x. Accepted hints keep t_best
/// as their refined period; when two hints refine to the same lag the one
/// with the higher power is kept.
FilterOutcome acf_filtering(std::span<const double> x, std::span<const PeriodHint> hints,
                            const FilterConfig& cfg = {});

/// Same, against a precomputed ACF.
FilterOutcome acf_filtering(const AcfCurve& curve, std::span<const PeriodHint> hints,
                            const FilterConfig& cfg = {});

}  // namespace aps
