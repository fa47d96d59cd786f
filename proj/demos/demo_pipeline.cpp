// End-to-end walkthrough: synthesize a speech-like clip, degrade it the way
// an in-ear microphone would, run the (untrained, seeded) band generator,
// and score both versions against the clean reference.

#include <cstdio>

#include "eben/eben.hpp"

int main() {
  eben::SpeechConfig speech;
  speech.duration_s = 4.0;
  speech.seed = 7;
  const eben::Signal clean = eben::synthesize_speech(speech);
  std::printf("clean clip: %zu samples @ %d Hz\n", clean.samples.size(),
              clean.sample_rate_hz);

  eben::DegradationConfig deg;
  const eben::DegradationResult degraded = eben::degrade(clean, deg);
  std::printf("degraded: lowpass %.0f Hz (Q=%.1f), noise %.1f dB below "
              "filtered power (sigma %.3e)\n",
              deg.cutoff_hz, deg.q_factor, deg.noise_snr_db,
              degraded.noise_sigma);

  const eben::GeneratorConfig gen_cfg;
  const eben::DiscriminatorConfig disc_cfg =
      eben::discriminator_config_for(gen_cfg);
  const eben::PqmfBank bank = eben::design_bank(gen_cfg.num_bands);
  std::printf("bank: %zu bands, %zu taps, round-trip %.1f dB\n",
              bank.num_bands, bank.taps, bank.reconstruction_snr_db);

  const eben::WeightStore weights =
      eben::init_model_weights(gen_cfg, disc_cfg, 0);
  std::printf("model: %zu generator + %zu discriminator parameters\n",
              eben::count_generator_parameters(gen_cfg),
              eben::count_discriminator_parameters(disc_cfg));

  // trim to a whole number of generator blocks
  const std::size_t block = gen_cfg.num_bands * gen_cfg.total_stride();
  eben::Signal deg_in = degraded.degraded;
  deg_in.samples.resize((deg_in.samples.size() / block) * block);
  eben::Signal ref = clean;
  ref.samples.resize(deg_in.samples.size());

  const eben::Signal enhanced = eben::enhance(gen_cfg, weights, bank, deg_in);
  const eben::LossBreakdown losses = eben::gan_losses(
      gen_cfg, disc_cfg, weights, bank, ref, enhanced);
  std::printf("losses: l_d %.4f, l_g_adv %.4f, l_g_rec %.4f, l_g %.4f\n",
              losses.l_d, losses.l_g_adv, losses.l_g_rec, losses.l_g);

  std::printf("si-sdr degraded %.2f dB | stoi degraded %.3f\n",
              eben::si_sdr(ref.samples, deg_in.samples),
              eben::stoi(ref, deg_in));

  const eben::LatencyReport lat =
      eben::report_latency(gen_cfg, bank, ref.sample_rate_hz);
  std::printf("latency: %lld samples lookahead (%.1f ms, target %.0f ms) -> %s\n",
              lat.lookahead_samples, lat.lookahead_ms, lat.target_ms,
              lat.meets_target ? "meets target" : "misses target");
  return 0;
}
