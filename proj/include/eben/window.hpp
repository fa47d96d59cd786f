#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace eben::detail {

inline double bessel_i0(double x) {
  // power series; converges fast for the beta range used here
  double sum = 1.0, term = 1.0;
  const double half_x = x / 2.0;
  for (int k = 1; k < 64; ++k) {
    term *= (half_x / k) * (half_x / k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

// Kaiser shape parameter for a target stopband attenuation in dB.
inline double kaiser_beta(double attenuation_db) {
  if (attenuation_db > 50.0) return 0.1102 * (attenuation_db - 8.7);
  if (attenuation_db >= 21.0)
    return 0.5842 * std::pow(attenuation_db - 21.0, 0.4) +
           0.07886 * (attenuation_db - 21.0);
  return 0.0;
}

inline double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

// Kaiser-windowed ideal lowpass, length N, normalized cutoff in cycles/sample.
// Built from one half and mirrored so p[n] == p[N-1-n] holds bit-exactly.
inline std::vector<double> kaiser_lowpass(std::size_t n_taps, double cutoff,
                                          double beta) {
  std::vector<double> p(n_taps);
  const double m = (static_cast<double>(n_taps) - 1.0) / 2.0;
  const double i0b = bessel_i0(beta);
  for (std::size_t n = 0; n < (n_taps + 1) / 2; ++n) {
    const double t = static_cast<double>(n) - m;
    const double r = t / m;
    const double w = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0b;
    const double v = w * 2.0 * cutoff * sinc(2.0 * cutoff * t);
    p[n] = v;
    p[n_taps - 1 - n] = v;
  }
  return p;
}

}  // namespace eben::detail
