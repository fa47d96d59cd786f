#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "eben/errors.hpp"
#include "eben/signal.hpp"
#include "eben/window.hpp"

namespace eben {

// Rational-rate conversion with a Kaiser-windowed sinc interpolator
// (80 dB design attenuation, 64-sample kernel span at the input rate,
// i.e. 64 taps per polyphase branch). Output sample j sits at input time
// j*M/L where L/M is the reduced rate ratio; cutoff is the smaller Nyquist.
inline Signal resample(const Signal& input, int target_rate_hz) {
  if (input.sample_rate_hz <= 0 || target_rate_hz <= 0)
    throw ArgumentError("resample: rates must be positive");
  Signal out;
  out.sample_rate_hz = target_rate_hz;
  if (target_rate_hz == input.sample_rate_hz) {
    out.samples = input.samples;
    return out;
  }
  if (input.samples.empty()) return out;

  const long long g = std::gcd(static_cast<long long>(input.sample_rate_hz),
                               static_cast<long long>(target_rate_hz));
  const double up = static_cast<double>(target_rate_hz / g);     // L
  const double down = static_cast<double>(input.sample_rate_hz / g);  // M
  const double cutoff = 0.5 * std::min(1.0, up / down);  // cycles/input sample
  const double half_width = 32.0;
  const double beta = detail::kaiser_beta(80.0);
  const double i0b = detail::bessel_i0(beta);

  const std::size_t t_in = input.samples.size();
  const std::size_t t_out = static_cast<std::size_t>(
      (static_cast<unsigned long long>(t_in) * static_cast<unsigned long long>(up) +
       static_cast<unsigned long long>(down) - 1) /
      static_cast<unsigned long long>(down));
  out.samples.assign(t_out, 0.0);

  for (std::size_t j = 0; j < t_out; ++j) {
    const double tau = static_cast<double>(j) * down / up;
    const long long n_lo =
        std::max(0LL, static_cast<long long>(std::ceil(tau - half_width)));
    const long long n_hi = std::min(static_cast<long long>(t_in) - 1,
                                    static_cast<long long>(std::floor(tau + half_width)));
    double acc = 0.0;
    for (long long n = n_lo; n <= n_hi; ++n) {
      const double t = static_cast<double>(n) - tau;
      const double r = t / half_width;
      const double w =
          detail::bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0b;
      acc += input.samples[static_cast<std::size_t>(n)] * w * 2.0 * cutoff *
             detail::sinc(2.0 * cutoff * t);
    }
    out.samples[j] = acc;
  }
  return out;
}

}  // namespace eben
