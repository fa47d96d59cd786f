#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "eben/biquad.hpp"
#include "eben/errors.hpp"
#include "eben/rng.hpp"
#include "eben/signal.hpp"

namespace eben {

// Occlusion model for in-ear capture: a steep zero-phase lowpass plus a
// sensor noise floor at a fixed level below the surviving signal power.
struct DegradationConfig {
  double cutoff_hz = 600.0;
  double q_factor = 1.0;
  double noise_snr_db = 23.0;  // noise sits this far below the reference power
  std::uint64_t noise_seed = 0;
  // Reference power for the noise level: the lowpassed signal by default,
  // optionally the clean input.
  bool noise_relative_to_clean = false;
};

struct DegradationResult {
  Signal degraded;
  Signal filtered;        // lowpass output before noise
  double noise_sigma = 0.0;
  double filtered_power = 0.0;  // mean square of the filtered signal
  double clean_power = 0.0;     // mean square of the input
};

inline DegradationResult degrade(const Signal& input,
                                 const DegradationConfig& config) {
  if (input.sample_rate_hz <= 0)
    throw ArgumentError("degrade: signal needs a positive sample rate");
  if (!(config.noise_snr_db == config.noise_snr_db))
    throw ArgumentError("degrade: noise_snr_db is NaN");
  const Biquad bq = design_lowpass_biquad(config.cutoff_hz, config.q_factor,
                                          static_cast<double>(input.sample_rate_hz));

  DegradationResult res;
  res.filtered.sample_rate_hz = input.sample_rate_hz;
  res.filtered.samples = filtfilt(bq, input.samples);

  const std::size_t t = input.samples.size();
  double p_clean = 0.0, p_filt = 0.0;
  for (std::size_t i = 0; i < t; ++i) {
    p_clean += input.samples[i] * input.samples[i];
    p_filt += res.filtered.samples[i] * res.filtered.samples[i];
  }
  p_clean /= static_cast<double>(t);
  p_filt /= static_cast<double>(t);
  res.clean_power = p_clean;
  res.filtered_power = p_filt;

  const double p_ref = config.noise_relative_to_clean ? p_clean : p_filt;
  res.noise_sigma = std::sqrt(p_ref * std::pow(10.0, -config.noise_snr_db / 10.0));

  Rng rng(config.noise_seed);
  res.degraded.sample_rate_hz = input.sample_rate_hz;
  res.degraded.samples.resize(t);
  for (std::size_t i = 0; i < t; ++i)
    res.degraded.samples[i] =
        res.filtered.samples[i] + res.noise_sigma * rng.gaussian();
  return res;
}

// Composite (forward-backward) amplitude response of the degradation lowpass
// in dB at the given frequencies in Hz. filtfilt squares the magnitude, so
// this is 40*log10|H| of the single pass.
inline std::vector<double> degradation_response_db(
    const DegradationConfig& config, double sample_rate_hz,
    const std::vector<double>& freqs_hz) {
  const Biquad bq =
      design_lowpass_biquad(config.cutoff_hz, config.q_factor, sample_rate_hz);
  std::vector<double> out(freqs_hz.size());
  for (std::size_t i = 0; i < freqs_hz.size(); ++i) {
    if (freqs_hz[i] < 0.0 || freqs_hz[i] > sample_rate_hz / 2.0)
      throw ArgumentError("response frequency outside [0, Nyquist]");
    const double w = 2.0 * M_PI * freqs_hz[i] / sample_rate_hz;
    const double mag = biquad_magnitude(bq, w);
    out[i] = 40.0 * std::log10(mag + 1e-300);
  }
  return out;
}

}  // namespace eben
