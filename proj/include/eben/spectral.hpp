#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "eben/errors.hpp"
#include "eben/fft.hpp"
#include "eben/signal.hpp"

namespace eben {

// Welch averaging parameters. Segment length must be a power of two; the
// window is a periodic Hann and segments are mean-removed before windowing.
struct WelchConfig {
  std::size_t segment_length = 1024;
  double overlap = 0.5;  // fraction of segment_length, in [0, 1)
};

// One-sided auto- and cross-spectral densities on a shared frequency grid.
struct SpectralEstimate {
  std::vector<double> frequency_hz;
  std::vector<double> pxx;
  std::vector<double> pyy;
  std::vector<std::complex<double>> pxy;  // E[conj(X) * Y]
  std::size_t num_segments = 0;
};

inline SpectralEstimate welch_cross(const Signal& x, const Signal& y,
                                    const WelchConfig& config = {}) {
  if (x.sample_rate_hz != y.sample_rate_hz)
    throw ArgumentError("welch_cross: sample rates differ");
  if (x.samples.size() != y.samples.size())
    throw ShapeError("welch_cross: signal lengths differ");
  const std::size_t nseg = config.segment_length;
  if (!detail::is_power_of_two(nseg) || nseg < 2)
    throw ArgumentError("welch_cross: segment_length must be a power of two");
  if (!(config.overlap >= 0.0) || config.overlap >= 1.0)
    throw ArgumentError("welch_cross: overlap must lie in [0, 1)");
  if (x.samples.size() < nseg)
    throw DegenerateInputError("welch_cross: signal shorter than one segment");

  const std::size_t noverlap = static_cast<std::size_t>(
      std::floor(config.overlap * static_cast<double>(nseg)));
  const std::size_t step = nseg - noverlap;
  const std::size_t n_segments = (x.samples.size() - nseg) / step + 1;
  const std::size_t n_bins = nseg / 2 + 1;
  const double fs = static_cast<double>(x.sample_rate_hz);

  const std::vector<double> window = hann_periodic(nseg);
  double win_energy = 0.0;
  for (double w : window) win_energy += w * w;
  const double scale = 1.0 / (fs * win_energy);

  SpectralEstimate est;
  est.num_segments = n_segments;
  est.frequency_hz.resize(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k)
    est.frequency_hz[k] = fs * static_cast<double>(k) / static_cast<double>(nseg);
  est.pxx.assign(n_bins, 0.0);
  est.pyy.assign(n_bins, 0.0);
  est.pxy.assign(n_bins, std::complex<double>(0.0, 0.0));

  std::vector<double> seg_x(nseg), seg_y(nseg);
  for (std::size_t s = 0; s < n_segments; ++s) {
    const std::size_t start = s * step;
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < nseg; ++i) {
      mean_x += x.samples[start + i];
      mean_y += y.samples[start + i];
    }
    mean_x /= static_cast<double>(nseg);
    mean_y /= static_cast<double>(nseg);
    for (std::size_t i = 0; i < nseg; ++i) {
      seg_x[i] = (x.samples[start + i] - mean_x) * window[i];
      seg_y[i] = (y.samples[start + i] - mean_y) * window[i];
    }
    const auto sx = rfft(seg_x, nseg);
    const auto sy = rfft(seg_y, nseg);
    for (std::size_t k = 0; k < n_bins; ++k) {
      est.pxx[k] += std::norm(sx[k]);
      est.pyy[k] += std::norm(sy[k]);
      est.pxy[k] += std::conj(sx[k]) * sy[k];
    }
  }

  for (std::size_t k = 0; k < n_bins; ++k) {
    // one-sided density: interior bins gather the negative frequencies too
    const double one_sided = (k == 0 || k == n_bins - 1) ? 1.0 : 2.0;
    const double norm = scale * one_sided / static_cast<double>(n_segments);
    est.pxx[k] *= norm;
    est.pyy[k] *= norm;
    est.pxy[k] *= norm;
  }
  return est;
}

// H1 estimator: H(f) = Pxy / Pxx. Bins whose input power is negligible
// relative to the peak are flagged invalid rather than amplified.
struct TransferFunction {
  std::vector<double> frequency_hz;
  std::vector<std::complex<double>> response;
  std::vector<double> magnitude_db;
  std::vector<double> phase_rad;
  std::vector<bool> valid;
};

inline TransferFunction transfer_function(const SpectralEstimate& est) {
  TransferFunction tf;
  const std::size_t n = est.frequency_hz.size();
  tf.frequency_hz = est.frequency_hz;
  tf.response.resize(n);
  tf.magnitude_db.resize(n);
  tf.phase_rad.resize(n);
  tf.valid.resize(n);
  double pxx_max = 0.0;
  for (double v : est.pxx) pxx_max = std::max(pxx_max, v);
  const double floor = 1e-12 * pxx_max;
  for (std::size_t k = 0; k < n; ++k) {
    if (est.pxx[k] <= floor) {
      tf.response[k] = 0.0;
      tf.magnitude_db[k] = -300.0;
      tf.phase_rad[k] = 0.0;
      tf.valid[k] = false;
      continue;
    }
    tf.response[k] = est.pxy[k] / est.pxx[k];
    tf.magnitude_db[k] = 20.0 * std::log10(std::abs(tf.response[k]) + 1e-300);
    tf.phase_rad[k] = std::arg(tf.response[k]);
    tf.valid[k] = true;
  }
  return tf;
}

// Magnitude-squared coherence |Pxy|^2 / (Pxx * Pyy), clamped to [0, 1].
// Bins with negligible power in either signal report zero coherence.
inline std::vector<double> coherence(const SpectralEstimate& est) {
  const std::size_t n = est.frequency_hz.size();
  double pxx_max = 0.0, pyy_max = 0.0;
  for (double v : est.pxx) pxx_max = std::max(pxx_max, v);
  for (double v : est.pyy) pyy_max = std::max(pyy_max, v);
  std::vector<double> coh(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (est.pxx[k] <= 1e-12 * pxx_max || est.pyy[k] <= 1e-12 * pyy_max) continue;
    const double g = std::norm(est.pxy[k]) / (est.pxx[k] * est.pyy[k]);
    coh[k] = std::clamp(g, 0.0, 1.0);
  }
  return coh;
}

// Log-magnitude STFT for inspection: periodic Hann frames, magnitudes in dB
// relative to the loudest bin, floored at -80 dB. Shape is [frames, bins].
struct Spectrogram {
  Tensor db;              // [num_frames, frame_length/2 + 1]
  double hop_s = 0.0;     // time step between frames
  double bin_hz = 0.0;    // frequency step between bins
  double floor_db = -80.0;
};

inline Spectrogram spectrogram(const Signal& signal,
                               std::size_t frame_length = 512,
                               std::size_t hop = 128) {
  if (!detail::is_power_of_two(frame_length) || frame_length < 2)
    throw ArgumentError("spectrogram: frame_length must be a power of two");
  if (hop == 0) throw ArgumentError("spectrogram: hop must be positive");
  if (signal.samples.size() < frame_length)
    throw DegenerateInputError("spectrogram: signal shorter than one frame");

  const std::size_t n_frames = (signal.samples.size() - frame_length) / hop + 1;
  const std::size_t n_bins = frame_length / 2 + 1;
  const std::vector<double> window = hann_periodic(frame_length);

  Spectrogram spec;
  spec.db = Tensor({n_frames, n_bins});
  spec.hop_s = static_cast<double>(hop) / signal.sample_rate_hz;
  spec.bin_hz = static_cast<double>(signal.sample_rate_hz) /
                static_cast<double>(frame_length);

  std::vector<double> frame(frame_length);
  double max_mag = 0.0;
  for (std::size_t f = 0; f < n_frames; ++f) {
    for (std::size_t i = 0; i < frame_length; ++i)
      frame[i] = signal.samples[f * hop + i] * window[i];
    const auto bins = rfft(frame, frame_length);
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double mag = std::abs(bins[k]);
      spec.db.at(f, k) = mag;
      max_mag = std::max(max_mag, mag);
    }
  }
  const double ref = max_mag > 0.0 ? max_mag : 1.0;
  for (auto& v : spec.db.data)
    v = std::max(spec.floor_db, 20.0 * std::log10(v / ref + 1e-300));
  return spec;
}

}  // namespace eben
