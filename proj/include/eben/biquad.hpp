#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "eben/errors.hpp"
#include "eben/signal.hpp"

namespace eben {

// Second-order IIR section, normalized so a0 == 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

// Audio-EQ-cookbook lowpass from the bilinear transform. Unity DC gain.
inline Biquad design_lowpass_biquad(double cutoff_hz, double q,
                                    double sample_rate_hz) {
  if (sample_rate_hz <= 0.0) throw ArgumentError("sample rate must be positive");
  if (!(cutoff_hz > 0.0) || cutoff_hz >= sample_rate_hz / 2.0)
    throw ArgumentError("cutoff must lie in (0, sample_rate/2)");
  if (!(q > 0.0)) throw ArgumentError("Q must be positive");
  const double w0 = 2.0 * M_PI * cutoff_hz / sample_rate_hz;
  const double c = std::cos(w0);
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  Biquad bq;
  bq.b0 = (1.0 - c) / 2.0 / a0;
  bq.b1 = (1.0 - c) / a0;
  bq.b2 = (1.0 - c) / 2.0 / a0;
  bq.a1 = -2.0 * c / a0;
  bq.a2 = (1.0 - alpha) / a0;
  return bq;
}

// |H(e^{jw})| at a normalized angular frequency w (radians/sample).
inline double biquad_magnitude(const Biquad& bq, double w) {
  const double cw = std::cos(w), sw = std::sin(w);
  const double c2w = std::cos(2.0 * w), s2w = std::sin(2.0 * w);
  const double nr = bq.b0 + bq.b1 * cw + bq.b2 * c2w;
  const double ni = -(bq.b1 * sw + bq.b2 * s2w);
  const double dr = 1.0 + bq.a1 * cw + bq.a2 * c2w;
  const double di = -(bq.a1 * sw + bq.a2 * s2w);
  return std::sqrt((nr * nr + ni * ni) / (dr * dr + di * di));
}

namespace detail {

// Direct form II transposed with explicit state, so initial conditions can
// seed the steady-state response of the first sample.
inline std::vector<double> lfilter(const Biquad& bq, const std::vector<double>& x,
                                   double z0_init, double z1_init) {
  std::vector<double> y(x.size());
  double z0 = z0_init, z1 = z1_init;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double yn = bq.b0 * x[n] + z0;
    z0 = bq.b1 * x[n] - bq.a1 * yn + z1;
    z1 = bq.b2 * x[n] - bq.a2 * yn;
    y[n] = yn;
  }
  return y;
}

// State that makes the filter start in steady state for a unit step input.
// Solves (I - A^T) zi = B for the transposed companion form.
inline void steady_state_zi(const Biquad& bq, double& zi0, double& zi1) {
  const double r0 = bq.b1 - bq.a1 * bq.b0;
  const double r1 = bq.b2 - bq.a2 * bq.b0;
  const double det = 1.0 + bq.a1 + bq.a2;
  if (std::abs(det) < 1e-300)
    throw DegenerateInputError("filter has a pole at DC; no steady state");
  zi0 = (r0 + r1) / det;
  zi1 = ((1.0 + bq.a1) * r1 - bq.a2 * r0) / det;
}

}  // namespace detail

// Zero-phase forward-backward filtering. The input is extended on both ends
// by 9 samples of odd reflection, each pass starts from the steady state of
// its first sample, and the extension is trimmed after the backward pass.
// The composite response is |H|^2 with exactly zero phase.
inline std::vector<double> filtfilt(const Biquad& bq,
                                    const std::vector<double>& x) {
  constexpr std::size_t pad = 9;  // 3 * max(len(a), len(b)) for a biquad
  if (x.size() <= pad)
    throw DegenerateInputError("filtfilt input must be longer than 9 samples");
  const std::size_t t = x.size();

  std::vector<double> ext;
  ext.reserve(t + 2 * pad);
  for (std::size_t j = pad; j >= 1; --j) ext.push_back(2.0 * x[0] - x[j]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t j = 1; j <= pad; ++j) ext.push_back(2.0 * x[t - 1] - x[t - 1 - j]);

  double zi0, zi1;
  detail::steady_state_zi(bq, zi0, zi1);

  std::vector<double> fwd =
      detail::lfilter(bq, ext, zi0 * ext.front(), zi1 * ext.front());
  std::reverse(fwd.begin(), fwd.end());
  std::vector<double> bwd =
      detail::lfilter(bq, fwd, zi0 * fwd.front(), zi1 * fwd.front());
  std::reverse(bwd.begin(), bwd.end());

  return std::vector<double>(bwd.begin() + pad, bwd.begin() + pad + t);
}

}  // namespace eben
