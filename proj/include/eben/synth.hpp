#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "eben/errors.hpp"
#include "eben/rng.hpp"
#include "eben/signal.hpp"

namespace eben {

// Deterministic speech-like test material: voiced syllables built from
// harmonics under randomized formants, fricative noise bursts, a steady
// low-frequency room rumble, and breathy pauses. The spectral balance knobs
// below are calibrated so the degradation pipeline lands in the score ranges
// typical for occluded-ear capture.
struct SpeechConfig {
  int sample_rate_hz = 16000;
  double duration_s = 4.0;
  std::uint64_t seed = 1;

  double f0_low_hz = 100.0;
  double f0_high_hz = 220.0;
  double vibrato_hz = 5.0;
  double vibrato_depth = 0.02;       // relative f0 excursion
  double syllable_am_hz = 3.5;       // slow amplitude modulation
  double tilt_db_per_octave = -5.0;  // spectral tilt above 200 Hz
  double voiced_level = 0.24;        // rms of a voiced segment
  double fricative_level = 0.085;    // rms of a fricative burst
  double rumble_level = 0.05;        // rms of the 30-250 Hz bed
  double breath_level = 0.012;       // rms of pause noise
  double peak = 0.80;                // final peak normalization
};

namespace detail {

// Lorentzian resonance bumps plus tilt; evaluated at harmonic frequencies.
struct FormantSet {
  double f1, f2, f3;
  double b1, b2, b3;

  double gain(double freq, double tilt_db_per_octave) const {
    auto bump = [](double f, double fc, double bw) {
      const double d = (f - fc) / bw;
      return 1.0 / (1.0 + d * d);
    };
    double g = bump(freq, f1, b1) + 0.63 * bump(freq, f2, b2) +
               0.40 * bump(freq, f3, b3) + 0.03;
    if (freq > 200.0) {
      const double octaves = std::log2(freq / 200.0);
      g *= std::pow(10.0, tilt_db_per_octave * octaves / 20.0);
    }
    return g;
  }
};

inline double raised_cosine_ramp(double t, double ramp) {
  if (t <= 0.0) return 0.0;
  if (t >= ramp) return 1.0;
  return 0.5 * (1.0 - std::cos(M_PI * t / ramp));
}

inline void scale_to_rms(std::vector<double>& seg, double target_rms) {
  double e = 0.0;
  for (double v : seg) e += v * v;
  if (e <= 0.0) return;
  const double rms = std::sqrt(e / static_cast<double>(seg.size()));
  const double g = target_rms / rms;
  for (double& v : seg) v *= g;
}

}  // namespace detail

inline Signal synthesize_speech(const SpeechConfig& cfg) {
  if (cfg.sample_rate_hz <= 0) throw ArgumentError("sample rate must be positive");
  if (!(cfg.duration_s > 0.0)) throw ArgumentError("duration must be positive");
  const double fs = static_cast<double>(cfg.sample_rate_hz);
  const std::size_t total = static_cast<std::size_t>(std::llround(cfg.duration_s * fs));
  if (total < 1024) throw ArgumentError("duration too short to be useful");

  Rng rng(cfg.seed);
  Signal out;
  out.sample_rate_hz = cfg.sample_rate_hz;
  out.samples.assign(total, 0.0);

  // ---- segment timeline: voiced / fricative / gap, with longer pauses ----
  struct Segment {
    enum Kind { voiced, fricative, pause } kind;
    std::size_t start, length;
  };
  std::vector<Segment> timeline;
  std::size_t cursor = 0;
  int since_pause = 0;
  while (cursor < total) {
    const double u = rng.uniform();
    Segment seg;
    seg.start = cursor;
    if (since_pause >= 5 && u < 0.55) {
      seg.kind = Segment::pause;
      seg.length = static_cast<std::size_t>((0.18 + 0.17 * rng.uniform()) * fs);
      since_pause = 0;
    } else if (u < 0.25) {
      seg.kind = Segment::fricative;
      seg.length = static_cast<std::size_t>((0.08 + 0.10 * rng.uniform()) * fs);
      ++since_pause;
    } else {
      seg.kind = Segment::voiced;
      seg.length = static_cast<std::size_t>((0.16 + 0.20 * rng.uniform()) * fs);
      ++since_pause;
    }
    seg.length = std::min(seg.length, total - cursor);
    cursor += seg.length;
    timeline.push_back(seg);
    if (seg.kind != Segment::pause && cursor < total) {
      const std::size_t gap =
          std::min(static_cast<std::size_t>((0.02 + 0.04 * rng.uniform()) * fs),
                   total - cursor);
      timeline.push_back({Segment::pause, cursor, gap});
      cursor += gap;
    }
  }

  const double ramp_s = 0.018;
  const double nyq_guard = 0.45 * fs;

  for (const Segment& seg : timeline) {
    if (seg.length == 0) continue;
    std::vector<double> buf(seg.length, 0.0);

    if (seg.kind == Segment::voiced) {
      const double f0 = cfg.f0_low_hz + rng.uniform() * (cfg.f0_high_hz - cfg.f0_low_hz);
      detail::FormantSet formants;
      formants.f1 = 350.0 + rng.uniform() * 450.0;
      formants.f2 = 1000.0 + rng.uniform() * 1000.0;
      formants.f3 = 2400.0 + rng.uniform() * 500.0;
      formants.b1 = 90.0 + rng.uniform() * 60.0;
      formants.b2 = 120.0 + rng.uniform() * 80.0;
      formants.b3 = 160.0 + rng.uniform() * 80.0;

      const std::size_t n_harm =
          static_cast<std::size_t>(std::floor(nyq_guard / f0));
      std::vector<double> amp(n_harm + 1, 0.0), phase(n_harm + 1, 0.0);
      for (std::size_t h = 1; h <= n_harm; ++h) {
        amp[h] = formants.gain(h * f0, cfg.tilt_db_per_octave);
        phase[h] = rng.uniform(0.0, 2.0 * M_PI);
      }
      const double vib_phase = rng.uniform(0.0, 2.0 * M_PI);
      const double am_phase = rng.uniform(0.0, 2.0 * M_PI);
      for (std::size_t i = 0; i < seg.length; ++i) {
        const double t = static_cast<double>(i) / fs;
        const double f_now =
            f0 * (1.0 + cfg.vibrato_depth *
                            std::sin(2.0 * M_PI * cfg.vibrato_hz * t + vib_phase));
        double v = 0.0;
        for (std::size_t h = 1; h <= n_harm; ++h) {
          phase[h] += 2.0 * M_PI * (h * f_now) / fs;
          v += amp[h] * std::sin(phase[h]);
        }
        const double am =
            1.0 + 0.30 * std::sin(2.0 * M_PI * cfg.syllable_am_hz * t + am_phase);
        const double env =
            detail::raised_cosine_ramp(t, ramp_s) *
            detail::raised_cosine_ramp(
                static_cast<double>(seg.length - 1 - i) / fs, ramp_s);
        buf[i] = v * am * env;
      }
      detail::scale_to_rms(buf, cfg.voiced_level * (0.75 + 0.5 * rng.uniform()));
    } else if (seg.kind == Segment::fricative) {
      // dense random sinusoids are band-limited noise by construction
      const double lo = 1500.0 + rng.uniform() * 1000.0;
      const double hi = std::min(6000.0, lo + 1500.0 + rng.uniform() * 2500.0);
      const std::size_t n_comp = 64;
      std::vector<double> freq(n_comp), phs(n_comp), a(n_comp);
      for (std::size_t c = 0; c < n_comp; ++c) {
        freq[c] = lo + rng.uniform() * (hi - lo);
        phs[c] = rng.uniform(0.0, 2.0 * M_PI);
        a[c] = 0.5 + rng.uniform();
      }
      for (std::size_t i = 0; i < seg.length; ++i) {
        const double t = static_cast<double>(i) / fs;
        double v = 0.0;
        for (std::size_t c = 0; c < n_comp; ++c)
          v += a[c] * std::sin(2.0 * M_PI * freq[c] * t + phs[c]);
        const double env =
            detail::raised_cosine_ramp(t, ramp_s) *
            detail::raised_cosine_ramp(
                static_cast<double>(seg.length - 1 - i) / fs, ramp_s);
        buf[i] = v * env;
      }
      detail::scale_to_rms(buf, cfg.fricative_level * (0.7 + 0.6 * rng.uniform()));
    } else {
      for (std::size_t i = 0; i < seg.length; ++i) buf[i] = rng.gaussian();
      // crude spectral footprint of breath: integrate white noise once
      double acc = 0.0;
      for (std::size_t i = 0; i < seg.length; ++i) {
        acc = 0.82 * acc + buf[i];
        buf[i] = acc;
      }
      detail::scale_to_rms(buf, cfg.breath_level);
    }

    for (std::size_t i = 0; i < seg.length; ++i) out.samples[seg.start + i] += buf[i];
  }

  // ---- continuous low-frequency rumble keeps coherence high below 400 Hz --
  {
    const double freqs[3] = {41.0 + 8.0 * rng.uniform(), 89.0 + 14.0 * rng.uniform(),
                             173.0 + 30.0 * rng.uniform()};
    double phs[3] = {rng.uniform(0.0, 2.0 * M_PI), rng.uniform(0.0, 2.0 * M_PI),
                     rng.uniform(0.0, 2.0 * M_PI)};
    const double drift_hz = 0.13;
    const double drift_phase = rng.uniform(0.0, 2.0 * M_PI);
    std::vector<double> bed(total, 0.0);
    for (std::size_t i = 0; i < total; ++i) {
      const double t = static_cast<double>(i) / fs;
      const double slow =
          0.75 + 0.25 * std::sin(2.0 * M_PI * drift_hz * t + drift_phase);
      double v = 0.0;
      for (int c = 0; c < 3; ++c)
        v += (1.0 - 0.2 * c) * std::sin(2.0 * M_PI * freqs[c] * t + phs[c]);
      bed[i] = slow * v;
    }
    detail::scale_to_rms(bed, cfg.rumble_level);
    for (std::size_t i = 0; i < total; ++i) out.samples[i] += bed[i];
  }

  // ---- peak normalization ----
  double peak = 0.0;
  for (double v : out.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    const double g = cfg.peak / peak;
    for (double& v : out.samples) v *= g;
  }
  return out;
}

}  // namespace eben
