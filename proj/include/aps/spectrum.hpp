#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace aps {

enum class Backend { classic, lomb_scargle };

std::string_view to_string(Backend backend);
/// Accepts "classic", "lomb-scargle" and "lomb_scargle".
std::optional<Backend> parse_backend(std::string_view name);

/// Half-spectrum power over the grid f_k = k/n, k = 1 .. ceil((n-1)/2).
/// The DC term is never stored.
struct Periodogram {
  std::size_t n = 0;
  std::vector<double> powers;  // powers[k - 1] belongs to frequency index k
  Backend backend = Backend::classic;

  std::size_t size() const noexcept { return powers.size(); }
  double power(std::size_t k) const { return powers.at(k - 1); }
  double frequency(std::size_t k) const { return static_cast<double>(k) / static_cast<double>(n); }
  double period(std::size_t k) const { return static_cast<double>(n) / static_cast<double>(k); }
  double max_power() const;
};

/// Circular autocorrelation of the mean-removed sequence, lags 0 .. n-1.
struct AcfCurve {
  std::size_t n = 0;
  std::vector<double> values;

  double operator[](std::size_t lag) const { return values[lag]; }
};

/// Number of stored frequencies for a length-n sequence: ceil((n-1)/2).
constexpr std::size_t half_spectrum_size(std::size_t n) noexcept { return n / 2; }

constexpr std::size_t kMinPeriodogramLength = 4;

/// Periodogram of the mean-removed sequence.
///
/// classic: |X_k|, the DFT magnitude.
/// lomb_scargle: the Lomb-Scargle power (with the time-offset tau) at
/// f_k = k/n. Trigonometric sums come from the FFT, so the cost is
/// O(n log n) rather than the O(n^2) of direct evaluation.
///
/// Throws std::invalid_argument for n < 4 or non-finite input.
Periodogram periodogram(std::span<const double> x, Backend backend);

/// DFT X_0 .. X_{n-1} of the mean-removed sequence.
std::vector<std::complex<double>> centered_dft(std::span<const double> x);

/// Circular ACF via the Wiener-Khinchin identity. Throws for n < 2.
AcfCurve acf(std::span<const double> x);

}  // namespace aps
