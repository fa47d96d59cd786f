#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <vector>

#include "eben/errors.hpp"
#include "eben/fft.hpp"
#include "eben/resample.hpp"
#include "eben/signal.hpp"

namespace eben {

// Scale-invariant SDR in dB. The estimate is projected onto the reference;
// the ratio of projection power to residual power is clamped to [-100, 100]
// so silent residuals and orthogonal estimates stay finite.
inline double si_sdr(const std::vector<double>& reference,
                     const std::vector<double>& estimate) {
  if (reference.size() != estimate.size())
    throw ShapeError("si_sdr: reference and estimate lengths differ");
  if (reference.empty()) throw DegenerateInputError("si_sdr: empty input");
  double rr = 0.0, er = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    rr += reference[i] * reference[i];
    er += estimate[i] * reference[i];
  }
  if (rr <= 0.0) throw DegenerateInputError("si_sdr: reference is silent");
  const double a = er / rr;
  const double target_power = a * a * rr;  // ||a r||^2
  double residual_power = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = estimate[i] - a * reference[i];
    residual_power += d * d;
  }
  if (target_power <= 0.0) return -100.0;
  if (residual_power <= 1e-10 * target_power) return 100.0;
  const double v = 10.0 * std::log10(target_power / residual_power);
  return std::clamp(v, -100.0, 100.0);
}

namespace detail {

constexpr double kStoiEps = DBL_EPSILON;
constexpr int kStoiRate = 10000;
constexpr std::size_t kStoiFrame = 256;
constexpr std::size_t kStoiHop = 128;
constexpr std::size_t kStoiFft = 512;
constexpr std::size_t kStoiBands = 15;
constexpr std::size_t kStoiSegment = 30;
constexpr double kStoiDynRangeDb = 40.0;
constexpr double kStoiBeta = -15.0;  // clip level: x * (1 + 10^(-beta/20))

// Frame starts follow the reference procedure: s = 0, hop, ... with
// s < length - frame (the final aligned frame is deliberately excluded).
inline std::size_t stoi_frame_count(std::size_t length) {
  if (length <= kStoiFrame) return 0;
  return (length - kStoiFrame - 1) / kStoiHop + 1;
}

// Drops frames whose windowed reference energy sits more than 40 dB below
// the loudest frame, then overlap-adds the surviving windowed frames.
inline void remove_silent_frames(std::vector<double>& x, std::vector<double>& y) {
  const std::size_t n_frames = stoi_frame_count(x.size());
  if (n_frames == 0) {
    x.clear();
    y.clear();
    return;
  }
  const std::vector<double> w = hann_symmetric(kStoiFrame);

  std::vector<double> energy_db(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) {
    double e = 0.0;
    for (std::size_t i = 0; i < kStoiFrame; ++i) {
      const double v = w[i] * x[f * kStoiHop + i];
      e += v * v;
    }
    energy_db[f] = 20.0 * std::log10(std::sqrt(e) + kStoiEps);
  }
  const double peak = *std::max_element(energy_db.begin(), energy_db.end());

  std::vector<std::size_t> kept;
  for (std::size_t f = 0; f < n_frames; ++f)
    if (energy_db[f] > peak - kStoiDynRangeDb) kept.push_back(f);

  const std::size_t out_len =
      kept.empty() ? 0 : (kept.size() - 1) * kStoiHop + kStoiFrame;
  std::vector<double> xs(out_len, 0.0), ys(out_len, 0.0);
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const std::size_t src = kept[k] * kStoiHop;
    const std::size_t dst = k * kStoiHop;
    for (std::size_t i = 0; i < kStoiFrame; ++i) {
      xs[dst + i] += w[i] * x[src + i];
      ys[dst + i] += w[i] * y[src + i];
    }
  }
  x = std::move(xs);
  y = std::move(ys);
}

// One-third-octave band mapping on the 512-point grid at 10 kHz: 15 bands
// with center frequencies 150 * 2^(k/3); band edges snap to the nearest bin.
inline std::vector<std::pair<std::size_t, std::size_t>> third_octave_bands() {
  const std::size_t n_bins = kStoiFft / 2 + 1;
  std::vector<std::pair<std::size_t, std::size_t>> bands(kStoiBands);
  auto nearest_bin = [&](double freq) {
    double best = 1e300;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < n_bins; ++i) {
      const double f = static_cast<double>(i) * kStoiRate / kStoiFft;
      const double d = (f - freq) * (f - freq);
      if (d < best) {
        best = d;
        arg = i;
      }
    }
    return arg;
  };
  for (std::size_t k = 0; k < kStoiBands; ++k) {
    const double lo = 150.0 * std::pow(2.0, (2.0 * k - 1.0) / 6.0);
    const double hi = 150.0 * std::pow(2.0, (2.0 * k + 1.0) / 6.0);
    bands[k] = {nearest_bin(lo), nearest_bin(hi)};  // half-open [lo, hi)
  }
  return bands;
}

// Windowed 256-sample frames zero-padded to 512, reduced to one-third-octave
// band magnitudes. Returns [bands][frames].
inline std::vector<std::vector<double>> stoi_band_envelope(
    const std::vector<double>& x) {
  const std::size_t n_frames = stoi_frame_count(x.size());
  const std::vector<double> w = hann_symmetric(kStoiFrame);
  const auto bands = third_octave_bands();

  std::vector<std::vector<double>> env(kStoiBands,
                                       std::vector<double>(n_frames, 0.0));
  std::vector<double> frame(kStoiFrame);
  for (std::size_t f = 0; f < n_frames; ++f) {
    for (std::size_t i = 0; i < kStoiFrame; ++i)
      frame[i] = w[i] * x[f * kStoiHop + i];
    const auto spec = rfft(frame, kStoiFft);
    for (std::size_t b = 0; b < kStoiBands; ++b) {
      double acc = 0.0;
      for (std::size_t k = bands[b].first; k < bands[b].second; ++k)
        acc += std::norm(spec[k]);
      env[b][f] = std::sqrt(acc);
    }
  }
  return env;
}

}  // namespace detail

// Short-time objective intelligibility of `estimate` against `reference`,
// following the published procedure: resample to 10 kHz, drop silent frames,
// build one-third-octave band envelopes, then average the correlation of
// 30-frame segments after per-band gain normalization and clipping. Returns
// a value in [-1, 1]; intelligible speech scores close to 1.
inline double stoi(const Signal& reference, const Signal& estimate) {
  if (reference.samples.size() != estimate.samples.size())
    throw ShapeError("stoi: reference and estimate lengths differ");
  if (reference.sample_rate_hz != estimate.sample_rate_hz)
    throw ArgumentError("stoi: sample rates differ");
  if (reference.sample_rate_hz <= 0)
    throw ArgumentError("stoi: sample rate must be positive");

  std::vector<double> x, y;
  if (reference.sample_rate_hz == detail::kStoiRate) {
    x = reference.samples;
    y = estimate.samples;
  } else {
    x = resample(reference, detail::kStoiRate).samples;
    y = resample(estimate, detail::kStoiRate).samples;
  }

  detail::remove_silent_frames(x, y);

  const std::size_t n_frames = detail::stoi_frame_count(x.size());
  if (n_frames < detail::kStoiSegment)
    throw DegenerateInputError(
        "stoi: fewer than 30 analysis frames remain after silence removal");

  const auto ex = detail::stoi_band_envelope(x);
  const auto ey = detail::stoi_band_envelope(y);

  const double clip_gain = 1.0 + std::pow(10.0, -detail::kStoiBeta / 20.0);
  const std::size_t n_segments = n_frames - detail::kStoiSegment + 1;
  const std::size_t seg = detail::kStoiSegment;

  double total = 0.0;
  std::vector<double> xs(seg), ys(seg);
  for (std::size_t m = 0; m < n_segments; ++m) {
    for (std::size_t b = 0; b < detail::kStoiBands; ++b) {
      double xx = 0.0, yy = 0.0;
      for (std::size_t t = 0; t < seg; ++t) {
        xs[t] = ex[b][m + t];
        ys[t] = ey[b][m + t];
        xx += xs[t] * xs[t];
        yy += ys[t] * ys[t];
      }
      const double alpha = std::sqrt(xx / (yy + detail::kStoiEps));
      double mx = 0.0, my = 0.0;
      for (std::size_t t = 0; t < seg; ++t) {
        ys[t] = std::min(alpha * ys[t], xs[t] * clip_gain);
        mx += xs[t];
        my += ys[t];
      }
      mx /= static_cast<double>(seg);
      my /= static_cast<double>(seg);
      double nx = 0.0, ny = 0.0;
      for (std::size_t t = 0; t < seg; ++t) {
        nx += (xs[t] - mx) * (xs[t] - mx);
        ny += (ys[t] - my) * (ys[t] - my);
      }
      nx = std::sqrt(nx) + detail::kStoiEps;
      ny = std::sqrt(ny) + detail::kStoiEps;
      double corr = 0.0;
      for (std::size_t t = 0; t < seg; ++t)
        corr += ((xs[t] - mx) / nx) * ((ys[t] - my) / ny);
      total += corr;
    }
  }
  return total / static_cast<double>(n_segments * detail::kStoiBands);
}

// Median and interquartile range with linearly interpolated quantiles
// (the convention spreadsheets and NumPy's default use).
struct SummaryStats {
  double median = 0.0;
  double iqr = 0.0;
  std::size_t n = 0;
};

inline double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw DegenerateInputError("quantile of empty set");
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("quantile p outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

inline SummaryStats summarize(const std::vector<double>& values) {
  SummaryStats s;
  s.n = values.size();
  if (values.empty()) return s;
  s.median = quantile(values, 0.5);
  s.iqr = quantile(values, 0.75) - quantile(values, 0.25);
  return s;
}

}  // namespace eben
