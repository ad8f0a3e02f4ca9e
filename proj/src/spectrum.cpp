#include "aps/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <fftw3.h>
#include <fmt/format.h>

namespace aps {

namespace {

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

RealBuffer make_real(std::size_t n) {
  return RealBuffer(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
}
ComplexBuffer make_complex(std::size_t n) {
  return ComplexBuffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

// The FFTW planner is not thread-safe; execution with new-array functions is.
// Plans are created once per length under a lock and reused afterwards.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan forward(std::size_t n) { return get(n, true); }
  fftw_plan inverse(std::size_t n) { return get(n, false); }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  fftw_plan get(std::size_t n, bool forward) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(n, forward);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto real = make_real(n);
    auto spec = make_complex(n / 2 + 1);
    const int len = static_cast<int>(n);
    fftw_plan plan = forward
        ? fftw_plan_dft_r2c_1d(len, real.get(), spec.get(), FFTW_ESTIMATE)
        : fftw_plan_dft_c2r_1d(len, spec.get(), real.get(), FFTW_ESTIMATE);
    if (plan == nullptr) throw std::runtime_error(fmt::format("FFTW planning failed for n={}", n));
    plans_.emplace(key, plan);
    return plan;
  }

  std::mutex mutex_;
  std::map<std::pair<std::size_t, bool>, fftw_plan> plans_;
};

void check_finite(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]))
      throw std::invalid_argument(fmt::format("non-finite input at index {}", i));
}

// Mean-removed copy of x in an FFTW buffer, and its half-complex DFT.
struct HalfSpectrum {
  ComplexBuffer bins;  // n/2 + 1 entries
  std::size_t n;
};

HalfSpectrum forward_centered(std::span<const double> x) {
  const std::size_t n = x.size();
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  auto in = make_real(n);
  for (std::size_t i = 0; i < n; ++i) in[i] = x[i] - mean;
  HalfSpectrum out{make_complex(n / 2 + 1), n};
  fftw_execute_dft_r2c(PlanCache::instance().forward(n), in.get(), out.bins.get());
  return out;
}

// Sum over t = 0..n-1 of exp(i * theta * t), as (cos-sum, sin-sum).
std::pair<double, double> unit_phasor_sum(double theta, std::size_t n) {
  const double half = 0.5 * theta;
  const double denom = std::sin(half);
  if (std::abs(denom) < 1e-12) {
    // theta is a multiple of 2*pi: every term is 1.
    return {static_cast<double>(n), 0.0};
  }
  const double mag = std::sin(static_cast<double>(n) * half) / denom;
  const double phase = half * static_cast<double>(n - 1);
  return {mag * std::cos(phase), mag * std::sin(phase)};
}

}  // namespace

std::string_view to_string(Backend backend) {
  return backend == Backend::classic ? "classic" : "lomb-scargle";
}

std::optional<Backend> parse_backend(std::string_view name) {
  if (name == "classic") return Backend::classic;
  if (name == "lomb-scargle" || name == "lomb_scargle") return Backend::lomb_scargle;
  return std::nullopt;
}

double Periodogram::max_power() const {
  return powers.empty() ? 0.0 : *std::max_element(powers.begin(), powers.end());
}

Periodogram periodogram(std::span<const double> x, Backend backend) {
  const std::size_t n = x.size();
  if (n < kMinPeriodogramLength)
    throw std::invalid_argument(fmt::format("periodogram needs at least {} values, got {}",
                                            kMinPeriodogramLength, n));
  check_finite(x);
  const auto spec = forward_centered(x);
  const std::size_t half = half_spectrum_size(n);

  Periodogram pg{n, std::vector<double>(half), backend};
  const double nd = static_cast<double>(n);
  for (std::size_t k = 1; k <= half; ++k) {
    const double re = spec.bins[k][0];
    const double im = spec.bins[k][1];
    if (backend == Backend::classic) {
      pg.powers[k - 1] = std::hypot(re, im);
      continue;
    }
    // Lomb-Scargle with sample times t = 0..n-1 and omega = 2*pi*k/n.
    // X_k = sum x cos(wt) - i sum x sin(wt).
    const double xc = re;
    const double xs = -im;
    const double omega = 2.0 * std::numbers::pi * static_cast<double>(k) / nd;
    const auto [c2, s2] = unit_phasor_sum(2.0 * omega, n);
    const double wtau = 0.5 * std::atan2(s2, c2);
    const double r2 = std::hypot(c2, s2);
    const double ct = std::cos(wtau) * xc + std::sin(wtau) * xs;
    const double st = std::cos(wtau) * xs - std::sin(wtau) * xc;
    const double scc = 0.5 * (nd + r2);
    const double sss = 0.5 * (nd - r2);
    double p = ct * ct / scc;
    // At the Nyquist bin every sin(w(t - tau)) vanishes; the term is 0/0.
    if (sss > 1e-9 * nd) p += st * st / sss;
    pg.powers[k - 1] = 0.5 * p;
  }
  return pg;
}

std::vector<std::complex<double>> centered_dft(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  check_finite(x);
  const auto spec = forward_centered(x);
  std::vector<std::complex<double>> full(n);
  for (std::size_t k = 0; k <= n / 2; ++k) full[k] = {spec.bins[k][0], spec.bins[k][1]};
  for (std::size_t k = n / 2 + 1; k < n; ++k) full[k] = std::conj(full[n - k]);
  return full;
}

AcfCurve acf(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument(fmt::format("ACF needs at least 2 values, got {}", n));
  check_finite(x);
  auto spec = forward_centered(x);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const double re = spec.bins[k][0];
    const double im = spec.bins[k][1];
    spec.bins[k][0] = re * re + im * im;
    spec.bins[k][1] = 0.0;
  }
  auto out = make_real(n);
  fftw_execute_dft_c2r(PlanCache::instance().inverse(n), spec.bins.get(), out.get());
  // Unnormalized inverse: n * sum_n x(n) x(n + tau); the ACF carries 1/n.
  const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  AcfCurve curve{n, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) curve.values[i] = out[i] * scale;
  return curve;
}

}  // namespace aps
