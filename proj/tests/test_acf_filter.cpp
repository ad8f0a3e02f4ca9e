#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "aps/acf_filter.hpp"
#include "oracles.hpp"

using aps::AcfCurve;
using aps::LagWindow;

namespace {

aps::PeriodHint hint_at(std::size_t n, std::size_t k, double power = 1.0) {
  return {k, static_cast<double>(n) / static_cast<double>(k),
          static_cast<double>(k) / static_cast<double>(n), power, 0.0, 0.9};
}

AcfCurve curve_of(std::vector<double> v) {
  AcfCurve c;
  c.n = v.size();
  c.values = std::move(v);
  return c;
}

std::vector<double> sinusoid(std::size_t n, double period, double noise, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / period + 0.3) +
           noise * d(gen);
  return x;
}

}  // namespace

TEST_CASE("search window examples") {
  CHECK(aps::search_window(100, 4) == LagWindow{22, 30});
  CHECK(aps::search_window(100, 1) == LagWindow{74, 98});
  const auto w = aps::search_window(64, 32);
  CHECK(w.lo == 2);
  CHECK(w.hi == 3);
  CHECK_THROWS_AS(aps::search_window(100, 0), std::invalid_argument);
  CHECK_THROWS_AS(aps::search_window(100, 51), std::invalid_argument);
}

TEST_CASE("search window brackets tau for every k") {
  for (std::size_t n : {32u, 100u, 500u, 513u}) {
    for (std::size_t k = 1; k <= n / 2; ++k) {
      const auto w = aps::search_window(n, k);
      const double tau = static_cast<double>(n) / static_cast<double>(k);
      CHECK(w.lo >= 2);
      if (w.length() == 0) continue;
      CHECK(w.hi <= n - 2);
      if (tau <= static_cast<double>(n - 2)) CHECK(static_cast<double>(w.lo) <= std::ceil(tau));
    }
  }
}

TEST_CASE("tent peaking at 52 is split exactly") {
  std::vector<double> v(100, 0.0);
  for (std::size_t i = 45; i <= 60; ++i)
    v[i] = i <= 52 ? 0.1 * static_cast<double>(i - 45) : 0.7 - 0.05 * static_cast<double>(i - 52);
  const auto fit = aps::fit_split(curve_of(v), {45, 60});
  CHECK(fit.t_best == 52);
  CHECK(fit.slope_left > 0.0);
  CHECK(fit.slope_right < 0.0);
  CHECK(fit.sse < 1e-20);
}

TEST_CASE("decreasing ACF fails the hill test") {
  std::vector<double> v(120);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 - 0.01 * static_cast<double>(i);
  const auto c = curve_of(v);
  const auto fit = aps::fit_split(c, aps::search_window(120, 4));
  CHECK(fit.slope_left == Catch::Approx(fit.slope_right).margin(1e-9));
  CHECK(fit.slope_left < 0.0);
  const std::vector<aps::PeriodHint> hints{hint_at(120, 4)};
  const auto out = aps::acf_filtering(c, hints);
  CHECK(out.periods.empty());
  CHECK(out.diagnostics.size() == 1);
}

TEST_CASE("split matches exhaustive search on random walks") {
  std::mt19937_64 gen(41);
  std::normal_distribution<double> step(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> len(3, 80);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(200);
    double acc = 0.0;
    for (auto& e : v) e = acc += step(gen);
    const std::size_t lo = 2 + trial;
    const std::size_t hi = std::min<std::size_t>(lo + len(gen) - 1, 198);
    const auto fit = aps::fit_split(curve_of(v), {lo, hi});
    const auto best = oracle::best_split(v, lo, hi);
    CHECK(fit.t_best == best.t);
    CHECK(fit.sse == Catch::Approx(best.sse).epsilon(1e-9).margin(1e-12));
    double sl = 0.0;
    oracle::line_sse(v, lo, fit.t_best, &sl);
    CHECK(fit.slope_left == Catch::Approx(sl).epsilon(1e-9).margin(1e-12));
  }
}

TEST_CASE("short windows are refused") {
  const auto c = curve_of(std::vector<double>(10, 0.0));
  CHECK_THROWS_AS(aps::fit_split(c, {3, 4}), std::invalid_argument);
  CHECK_THROWS_AS(aps::fit_split(c, {5, 12}), std::invalid_argument);
  CHECK_NOTHROW(aps::fit_split(c, {3, 5}));
}

TEST_CASE("empty hint list gives empty output") {
  const auto x = sinusoid(100, 10.0, 0.0, 1);
  const auto out = aps::acf_filtering(x, std::vector<aps::PeriodHint>{});
  CHECK(out.periods.empty());
  CHECK(out.diagnostics.empty());
}

TEST_CASE("noiseless on-grid periods refine to the oracle split") {
  constexpr std::size_t n = 480;
  for (std::size_t period : {8u, 10u, 12u, 15u, 16u, 20u, 24u, 30u, 40u, 48u, 60u, 80u, 96u, 120u}) {
    const auto x = sinusoid(n, static_cast<double>(period), 0.0, 0);
    const std::vector<aps::PeriodHint> hints{hint_at(n, n / period)};
    const auto out = aps::acf_filtering(x, hints);
    INFO("period " << period);
    REQUIRE(out.periods.size() == 1);
    const auto& p = out.periods[0];
    const auto direct = oracle::circular_acf(x);
    CHECK(p.refined_period == oracle::best_split(direct, p.window.lo, p.window.hi).t);
    // Two lines on a cosine hill drift off the crest once the window gets
    // wide; short periods stay within one lag.
    if (period <= 80)
      CHECK(std::abs(static_cast<long>(p.refined_period) - static_cast<long>(period)) <= 1);
    else
      CHECK(std::abs(static_cast<double>(p.refined_period) - static_cast<double>(period)) <=
            0.03 * static_cast<double>(period));
    CHECK(p.window.contains(p.refined_period));
    CHECK(p.slope_left > p.slope_right);
    CHECK(p.delta_theta > 0.01);
  }
}

TEST_CASE("planted period 50 with low noise refines near the ACF peak") {
  const auto x = sinusoid(500, 50.0, 0.1, 3);
  const std::vector<aps::PeriodHint> hints{hint_at(500, 10)};
  const auto out = aps::acf_filtering(x, hints);
  REQUIRE(out.periods.size() == 1);
  const auto& p = out.periods[0];
  CHECK(p.refined_period >= 48);
  CHECK(p.refined_period <= 52);
  CHECK(p.delta_theta > 0.01);

  const auto direct = oracle::circular_acf(x);
  const auto peak = std::max_element(direct.begin() + static_cast<long>(p.window.lo),
                                     direct.begin() + static_cast<long>(p.window.hi) + 1) -
                    direct.begin();
  CHECK(std::abs(static_cast<long>(p.refined_period) - static_cast<long>(peak)) <= 2);
}

TEST_CASE("delta theta threshold is configurable") {
  const auto x = sinusoid(500, 50.0, 0.0, 0);
  const std::vector<aps::PeriodHint> hints{hint_at(500, 10)};
  CHECK(aps::acf_filtering(x, hints, {0.01}).periods.size() == 1);
  CHECK(aps::acf_filtering(x, hints, {0.99}).periods.empty());
}

TEST_CASE("hints refining to one lag keep the strongest, sorted by period") {
  // Two sinusoids: 60 and 20 on N=480; add a spurious copy of the k=8 hint
  // with lower power.
  std::vector<double> x(480);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = static_cast<double>(i);
    x[i] = std::sin(2.0 * std::numbers::pi * t / 60.0) + std::sin(2.0 * std::numbers::pi * t / 20.0);
  }
  const std::vector<aps::PeriodHint> hints{hint_at(480, 8, 5.0), hint_at(480, 8, 2.0),
                                           hint_at(480, 24, 3.0)};
  const auto out = aps::acf_filtering(x, hints);
  REQUIRE(out.periods.size() == 2);
  CHECK(out.periods[0].refined_period > out.periods[1].refined_period);
  CHECK(out.periods[0].source_hint.power == 5.0);
}

TEST_CASE("slope angle is normalized") {
  CHECK(aps::slope_angle(0.0) == 0.0);
  CHECK(aps::slope_angle(1.0) == Catch::Approx(0.5));
  CHECK(aps::slope_angle(-1.0) == Catch::Approx(-0.5));
  CHECK(aps::slope_angle(1e12) < 1.0);
}
