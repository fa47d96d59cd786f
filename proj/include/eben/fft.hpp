#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "eben/errors.hpp"

namespace eben {

namespace detail {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 Cooley-Tukey.
inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    for (auto& v : a) v /= static_cast<double>(n);
  }
}

}  // namespace detail

// Real-input FFT. Returns the n/2 + 1 non-redundant bins of the length-n DFT
// of `frame` zero-padded to n. Bin k is sum_t frame[t] * exp(-2*pi*i*k*t/n).
inline std::vector<std::complex<double>> rfft(const std::vector<double>& frame,
                                              std::size_t n) {
  if (!detail::is_power_of_two(n))
    throw ArgumentError("rfft length must be a power of two");
  if (frame.size() > n)
    throw ArgumentError("rfft frame longer than transform length");
  std::vector<std::complex<double>> a(n, {0.0, 0.0});
  for (std::size_t i = 0; i < frame.size(); ++i) a[i] = {frame[i], 0.0};
  detail::fft_inplace(a, false);
  a.resize(n / 2 + 1);
  return a;
}

// Symmetric Hann window (endpoints zero), the MATLAB hanning(n) convention.
inline std::vector<double> hann_symmetric(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * (i + 1) / (n + 1)));
  return w;
}

// Periodic Hann window, the DFT-even convention used for spectral averaging.
inline std::vector<double> hann_periodic(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / n));
  return w;
}

}  // namespace eben
