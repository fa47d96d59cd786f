#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "eben/conv.hpp"
#include "eben/errors.hpp"
#include "eben/rng.hpp"
#include "eben/signal.hpp"
#include "eben/window.hpp"

namespace eben {

// Near-perfect-reconstruction pseudo-QMF bank. All filters are cosine
// modulations of one lowpass prototype; the prototype is a Kaiser-windowed
// sinc whose cutoff is tuned to minimize the impulse round-trip error.
struct PqmfBank {
  std::size_t num_bands = 0;               // M
  std::size_t taps = 0;                    // N, even
  double cutoff = 0.0;                     // normalized, cycles/sample
  double attenuation_db = 0.0;             // Kaiser design parameter
  std::vector<double> prototype;           // p[0..N), symmetric
  Tensor analysis_kernels;                 // [M, N], H_i
  Tensor synthesis_kernels;                // [M, N], G_i
  double reconstruction_snr_db = 0.0;      // certified at design time
};

// Decimated band signals: bands[i] covers normalized frequencies
// [i/(2M), (i+1)/(2M)] of the original signal.
struct Subbands {
  Tensor bands;  // [M, L]
  int sample_rate_hz = 0;
  std::size_t num_bands = 0;
  std::size_t original_length = 0;  // pre-padding sample count

  std::size_t band_length() const { return bands.shape.empty() ? 0 : bands.shape[1]; }
};

namespace detail {

inline void modulate_kernels(PqmfBank& bank) {
  const std::size_t m_bands = bank.num_bands;
  const std::size_t n = bank.taps;
  const double mid = (static_cast<double>(n) - 1.0) / 2.0;
  bank.analysis_kernels = Tensor({m_bands, n});
  bank.synthesis_kernels = Tensor({m_bands, n});
  for (std::size_t i = 0; i < m_bands; ++i) {
    const double omega = (2.0 * i + 1.0) * M_PI / (2.0 * m_bands);
    const double phi = (i % 2 == 0 ? 1.0 : -1.0) * M_PI / 4.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double arg = omega * (static_cast<double>(t) - mid);
      bank.analysis_kernels.at(i, t) = 2.0 * bank.prototype[t] * std::cos(arg + phi);
      bank.synthesis_kernels.at(i, t) = 2.0 * bank.prototype[t] * std::cos(arg - phi);
    }
  }
}

}  // namespace detail

inline Subbands analyze(const PqmfBank& bank, const Signal& signal);
inline Signal synthesize(const PqmfBank& bank, const Subbands& subbands);

namespace detail {

// Sum of squared deviations between a centered unit impulse and its
// round trip through the bank. The design search minimizes this.
inline double impulse_roundtrip_error(const PqmfBank& bank) {
  const std::size_t m = bank.num_bands;
  const std::size_t n = bank.taps;
  std::size_t t_len = 4 * n;
  t_len = ((t_len + m - 1) / m) * m;
  Signal x;
  x.sample_rate_hz = 1;
  x.samples.assign(t_len, 0.0);
  const std::size_t t0 = t_len / 2;
  x.samples[t0] = 1.0;
  const Signal r = synthesize(bank, analyze(bank, x));
  double err = 0.0;
  for (std::size_t t = 0; t < t_len; ++t) {
    const double d = r.samples[t] - x.samples[t];
    err += d * d;
  }
  return err;
}

inline double measure_white_noise_snr(const PqmfBank& bank) {
  const std::size_t t_len = 1u << 14;
  Rng rng(0xEBE4C0DEULL);
  Signal x;
  x.sample_rate_hz = 1;
  x.samples.resize(t_len);
  for (auto& v : x.samples) v = rng.uniform(-1.0, 1.0);
  const Signal r = synthesize(bank, analyze(bank, x));
  // edges excluded: the first/last N samples see the padding transient
  const std::size_t n = bank.taps;
  double sig = 0.0, err = 0.0;
  for (std::size_t t = n; t + n < t_len; ++t) {
    sig += x.samples[t] * x.samples[t];
    const double d = r.samples[t] - x.samples[t];
    err += d * d;
  }
  if (err <= 0.0) return 300.0;
  return 10.0 * std::log10(sig / err);
}

}  // namespace detail

// Designs an M-band bank. The prototype cutoff is found by golden-section
// search (200 iterations max, tolerance 1e-7) on the impulse round-trip
// error over (0.25/(2M), 1.5/(2M)].
inline PqmfBank design_bank(std::size_t num_bands, std::size_t taps = 0,
                            double attenuation_db = 100.0) {
  if (num_bands < 2) throw ArgumentError("design_bank requires M >= 2");
  if (taps == 0) taps = 8 * num_bands;
  if (taps % 2 != 0) throw DesignError("design_bank requires an even tap count");
  if (taps < 4 * num_bands)
    throw DesignError("design_bank requires taps >= 4M for usable stopband");
  if (attenuation_db <= 0.0)
    throw ArgumentError("attenuation_db must be positive");

  const double beta = detail::kaiser_beta(attenuation_db);
  PqmfBank bank;
  bank.num_bands = num_bands;
  bank.taps = taps;
  bank.attenuation_db = attenuation_db;

  auto objective = [&](double cutoff) {
    bank.cutoff = cutoff;
    bank.prototype = detail::kaiser_lowpass(taps, cutoff, beta);
    detail::modulate_kernels(bank);
    return detail::impulse_roundtrip_error(bank);
  };

  double lo = 0.25 / (2.0 * num_bands);
  double hi = 1.5 / (2.0 * num_bands);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = objective(c);
  double fd = objective(d);
  for (int it = 0; it < 200 && (hi - lo) > 1e-7; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = objective(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = objective(d);
    }
  }
  const double best = 0.5 * (lo + hi);
  objective(best);  // leaves bank at the optimum
  bank.reconstruction_snr_db = detail::measure_white_noise_snr(bank);
  if (bank.reconstruction_snr_db < 20.0)
    throw DesignError("bank design failed: round-trip SNR " +
                      std::to_string(bank.reconstruction_snr_db) + " dB < 20 dB");
  return bank;
}

// M-band analysis. Strided convolution with each H_i at stride M after
// centered zero-padding, so each band has exactly ceil(T/M) samples.
// Non-divisible lengths are right-padded with zeros; the original length is
// recorded on the result.
inline Subbands analyze(const PqmfBank& bank, const Signal& signal) {
  const std::size_t m = bank.num_bands;
  const std::size_t n = bank.taps;
  const std::size_t t_orig = signal.samples.size();
  const std::size_t t_pad = ((t_orig + m - 1) / m) * m;

  Tensor input({1, t_pad});
  for (std::size_t i = 0; i < t_orig; ++i) input.data[i] = signal.samples[i];

  ConvSpec spec;
  spec.in_channels = 1;
  spec.out_channels = m;
  spec.kernel_size = n;
  spec.stride = m;
  spec.pad_left = (n - m) / 2;
  spec.pad_right = (n - m) - spec.pad_left;

  Tensor weight({m, 1, n});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < n; ++k)
      weight.at(i, 0, k) = bank.analysis_kernels.at(i, k);

  Subbands out;
  out.bands = conv1d(input, weight, {}, spec);
  out.sample_rate_hz = signal.sample_rate_hz;
  out.num_bands = m;
  out.original_length = t_orig;
  return out;
}

// M-band synthesis: upsample each band by M and correlate with G_i, summed
// and scaled by M. The transposed-convolution scatter realizes correlation
// with G_i when handed the flipped kernel, and flip(G_i) is bit-exactly H_i,
// so the scatter weights below come from the analysis set. The matched
// analysis/synthesis pair composites to zero lag apart from the analysis
// padding. Output length is exactly M*L.
inline Signal synthesize(const PqmfBank& bank, const Subbands& subbands) {
  const std::size_t m = bank.num_bands;
  const std::size_t n = bank.taps;
  if (subbands.bands.rank() != 2 || subbands.bands.shape[0] != m)
    throw ShapeError("subband band count does not match bank");
  const std::size_t band_len = subbands.bands.shape[1];

  ConvSpec spec;
  spec.in_channels = m;
  spec.out_channels = 1;
  spec.kernel_size = n;
  spec.stride = m;

  Tensor weight({m, 1, n});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < n; ++k)
      weight.at(i, 0, k) = bank.analysis_kernels.at(i, k);

  const Tensor full = conv1d_transposed(subbands.bands, weight, {}, spec);
  const std::size_t offset = (n - m) / 2;  // the analysis pad_left

  Signal out;
  out.sample_rate_hz = subbands.sample_rate_hz;
  out.samples.assign(m * band_len, 0.0);
  const double gain = static_cast<double>(m);
  const std::size_t full_len = full.shape[1];
  for (std::size_t t = 0; t < out.samples.size(); ++t) {
    const std::size_t src = t + offset;
    if (src < full_len) out.samples[t] = gain * full.data[src];
  }
  return out;
}

struct BandResponse {
  std::vector<double> normalized_frequency;  // cycles/sample, [0, 0.5)
  std::vector<double> magnitude_db;
};

// Magnitude response of analysis filter `band_index`, sampled at n_points
// frequencies across [0, 0.5). Equivalent to an oversampled zero-padded DFT.
inline BandResponse band_frequency_response(const PqmfBank& bank,
                                            std::size_t band_index,
                                            std::size_t n_points) {
  if (band_index >= bank.num_bands)
    throw ArgumentError("band index out of range");
  if (n_points == 0) throw ArgumentError("n_points must be positive");
  BandResponse resp;
  resp.normalized_frequency.resize(n_points);
  resp.magnitude_db.resize(n_points);
  const std::size_t n = bank.taps;
  for (std::size_t j = 0; j < n_points; ++j) {
    const double f = 0.5 * static_cast<double>(j) / static_cast<double>(n_points);
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = -2.0 * M_PI * f * static_cast<double>(t);
      acc += bank.analysis_kernels.at(band_index, t) *
             std::complex<double>(std::cos(ang), std::sin(ang));
    }
    resp.normalized_frequency[j] = f;
    resp.magnitude_db[j] = 20.0 * std::log10(std::abs(acc) + 1e-300);
  }
  return resp;
}

}  // namespace eben
