#include "aps/acf_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace aps {

namespace {

struct LineFit {
  double slope = 0.0;
  double sse = 0.0;
};

// OLS line through (lag, acf[lag]) for lag in [lo, hi]; at least two points.
LineFit fit_line(const AcfCurve& acf, std::size_t lo, std::size_t hi) {
  const double count = static_cast<double>(hi - lo + 1);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    mx += static_cast<double>(i);
    my += acf[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const double dx = static_cast<double>(i) - mx;
    sxx += dx * dx;
    sxy += dx * (acf[i] - my);
  }
  const double slope = sxy / sxx;
  double sse = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const double r = acf[i] - my - slope * (static_cast<double>(i) - mx);
    sse += r * r;
  }
  return {slope, sse};
}

}  // namespace

LagWindow search_window(std::size_t n, std::size_t k) {
  if (n < 4) throw std::invalid_argument(fmt::format("search window needs n >= 4, got {}", n));
  if (k < 1 || k > half_spectrum_size(n))
    throw std::invalid_argument(
        fmt::format("frequency index {} outside [1, {}] for n={}", k, half_spectrum_size(n), n));
  const double nd = static_cast<double>(n);
  const double tau = nd / static_cast<double>(k);
  const double tau_next = nd / static_cast<double>(k + 1);
  const double tau_prev = k == 1 ? nd : nd / static_cast<double>(k - 1);
  // The slack keeps exact integers such as 74.0 from rounding outward.
  constexpr double eps = 1e-9;
  const double lo_real = std::ceil((tau + tau_next) / 2.0 - 1.0 - eps);
  const double hi_real = std::floor((tau + tau_prev) / 2.0 + 1.0 + eps);
  const double lo = std::max(lo_real, 2.0);
  const double hi = std::min(hi_real, nd - 2.0);
  if (hi < lo) return {static_cast<std::size_t>(lo), static_cast<std::size_t>(lo) - 1};
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

SplitFit fit_split(const AcfCurve& acf, LagWindow window) {
  if (window.length() < kMinSplitWindow)
    throw std::invalid_argument(fmt::format("window [{}, {}] is shorter than {} lags", window.lo,
                                            window.hi, kMinSplitWindow));
  if (window.hi >= acf.values.size())
    throw std::invalid_argument(fmt::format("window [{}, {}] exceeds ACF of length {}", window.lo,
                                            window.hi, acf.values.size()));
  SplitFit best;
  best.sse = std::numeric_limits<double>::infinity();
  for (std::size_t t = window.lo + 1; t < window.hi; ++t) {
    const auto left = fit_line(acf, window.lo, t);
    const auto right = fit_line(acf, t, window.hi);
    const double sse = left.sse + right.sse;
    if (sse < best.sse) best = {t, left.slope, right.slope, sse};
  }
  return best;
}

double slope_angle(double slope) { return std::atan(slope) / (std::numbers::pi / 2.0); }

FilterOutcome acf_filtering(std::span<const double> x, std::span<const PeriodHint> hints,
                            const FilterConfig& cfg) {
  if (hints.empty()) return {};
  return acf_filtering(acf(x), hints, cfg);
}

FilterOutcome acf_filtering(const AcfCurve& curve, std::span<const PeriodHint> hints,
                            const FilterConfig& cfg) {
  FilterOutcome out;
  for (const auto& hint : hints) {
    LagWindow window;
    try {
      window = search_window(curve.n, hint.k);
    } catch (const std::invalid_argument& e) {
      out.diagnostics.push_back(fmt::format("hint k={}: {}", hint.k, e.what()));
      continue;
    }
    if (window.length() < kMinSplitWindow) {
      out.diagnostics.push_back(fmt::format("hint k={} (period {:.3f}): window [{}, {}] too short",
                                            hint.k, hint.period, window.lo, window.hi));
      continue;
    }
    const auto split = fit_split(curve, window);
    const double dtheta = std::abs(slope_angle(split.slope_left) - slope_angle(split.slope_right));
    if (!(split.slope_left > split.slope_right && dtheta > cfg.delta_theta)) {
      out.diagnostics.push_back(
          fmt::format("hint k={} (period {:.3f}): not on a hill (slopes {:.6g}, {:.6g})", hint.k,
                      hint.period, split.slope_left, split.slope_right));
      continue;
    }
    ValidatedPeriod vp{hint, split.t_best, split.slope_left, split.slope_right, dtheta, window};
    auto dup = std::find_if(out.periods.begin(), out.periods.end(), [&](const ValidatedPeriod& p) {
      return p.refined_period == vp.refined_period;
    });
    if (dup == out.periods.end()) {
      out.periods.push_back(vp);
    } else if (vp.source_hint.power > dup->source_hint.power) {
      *dup = vp;
    }
  }
  std::stable_sort(out.periods.begin(), out.periods.end(),
                   [](const ValidatedPeriod& a, const ValidatedPeriod& b) {
                     return a.refined_period > b.refined_period;
                   });
  return out;
}

}  // namespace aps
