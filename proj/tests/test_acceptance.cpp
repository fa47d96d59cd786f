// Acceptance gate: eleven numbered checks over the full toolkit, one
// PASS/FAIL line each, nonzero exit if any fails. Checks carry their own
// tolerances and wall-clock budgets; nothing here depends on the unit tests.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eben/eben.hpp"
#include "stoi_cases.hpp"

namespace {

std::string scratch_path(const std::string& name) {
  return std::string(EBEN_SCRATCH_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(double v, int digits = 3) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

// ---- straight-line layer replicas (independent of the library's conv) -----

eben::Tensor plain_conv(const eben::Tensor& x, const eben::Tensor& w,
                        const std::vector<double>& bias, std::size_t stride,
                        std::size_t dilation, std::size_t pad,
                        std::size_t groups) {
  const std::size_t c_out = w.shape[0];
  const std::size_t cpg_in = w.shape[1];
  const std::size_t k = w.shape[2];
  const std::size_t cpg_out = c_out / groups;
  const std::size_t t_in = x.shape[1];
  const std::size_t span = t_in + 2 * pad;
  const std::size_t reach = dilation * (k - 1) + 1;
  const std::size_t t_out = span >= reach ? (span - reach) / stride + 1 : 0;
  eben::Tensor out({c_out, t_out});
  for (std::size_t co = 0; co < c_out; ++co)
    for (std::size_t t = 0; t < t_out; ++t) {
      double acc = bias.empty() ? 0.0 : bias[co];
      for (std::size_t cl = 0; cl < cpg_in; ++cl)
        for (std::size_t kk = 0; kk < k; ++kk) {
          const long ti = static_cast<long>(t * stride + kk * dilation) -
                          static_cast<long>(pad);
          if (ti < 0 || ti >= static_cast<long>(t_in)) continue;
          const std::size_t ci = (co / cpg_out) * cpg_in + cl;
          acc += w.at(co, cl, kk) * x.at(ci, static_cast<std::size_t>(ti));
        }
      out.at(co, t) = acc;
    }
  return out;
}

eben::Tensor plain_tconv(const eben::Tensor& x, const eben::Tensor& w,
                         const std::vector<double>& bias, std::size_t stride,
                         std::size_t pad) {
  const std::size_t c_in = w.shape[0];
  const std::size_t c_out = w.shape[1];
  const std::size_t k = w.shape[2];
  const std::size_t t_in = x.shape[1];
  const std::size_t t_out = (t_in - 1) * stride + k - 2 * pad;
  eben::Tensor out({c_out, t_out});
  for (std::size_t co = 0; co < c_out; ++co)
    for (std::size_t u = 0; u < t_out; ++u)
      out.at(co, u) = bias.empty() ? 0.0 : bias[co];
  for (std::size_t ci = 0; ci < c_in; ++ci)
    for (std::size_t t = 0; t < t_in; ++t)
      for (std::size_t co = 0; co < c_out; ++co)
        for (std::size_t kk = 0; kk < k; ++kk) {
          const long u =
              static_cast<long>(t * stride + kk) - static_cast<long>(pad);
          if (u < 0 || u >= static_cast<long>(t_out)) continue;
          out.at(co, static_cast<std::size_t>(u)) += w.at(ci, co, kk) * x.at(ci, t);
        }
  return out;
}

eben::Tensor plain_elu(eben::Tensor t) {
  for (auto& v : t.data) v = v > 0.0 ? v : std::exp(v) - 1.0;
  return t;
}

eben::Tensor plain_add(const eben::Tensor& a, const eben::Tensor& b) {
  eben::Tensor out = a;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
  return out;
}

eben::Tensor oracle_generator(const eben::GeneratorConfig& cfg,
                              const eben::WeightStore& store,
                              const eben::Tensor& input) {
  auto w = [&](const std::string& n) -> const eben::Tensor& {
    return store.get(n + ".weight");
  };
  auto b = [&](const std::string& n) { return store.get(n + ".bias").data; };
  eben::Tensor x = plain_conv(input, w("gen.conv_in"), b("gen.conv_in"), 1, 1, 3, 1);
  std::vector<eben::Tensor> skips = {x};
  for (std::size_t j = 0; j < cfg.encoder_strides.size(); ++j) {
    const std::size_t s = cfg.encoder_strides[j];
    const std::string stage = "gen.enc" + std::to_string(j);
    x = plain_conv(plain_elu(x), w(stage + ".down"), b(stage + ".down"), s, 1,
                   s / 2, 1);
    for (std::size_t r = 0; r < cfg.residual_dilations.size(); ++r) {
      const std::size_t d = cfg.residual_dilations[r];
      const std::string unit = stage + ".res" + std::to_string(r);
      eben::Tensor h = plain_conv(plain_elu(x), w(unit + ".conv1"),
                                  b(unit + ".conv1"), 1, d, d, 1);
      h = plain_conv(plain_elu(h), w(unit + ".conv2"), b(unit + ".conv2"), 1, 1,
                     0, 1);
      x = plain_add(x, h);
    }
    skips.push_back(x);
  }
  eben::Tensor y = plain_conv(plain_elu(x), w("gen.bottleneck"),
                              b("gen.bottleneck"), 1, 1, 1, 1);
  y = plain_conv(plain_elu(y), w("gen.expand"), b("gen.expand"), 1, 1, 1, 1);
  y = plain_add(y, skips.back());
  for (std::size_t j = 0; j < cfg.encoder_strides.size(); ++j) {
    const std::size_t s =
        cfg.encoder_strides[cfg.encoder_strides.size() - 1 - j];
    const std::string name = "gen.dec" + std::to_string(j) + ".up";
    y = plain_tconv(plain_elu(y), w(name), b(name), s, s / 2);
    y = plain_add(y, skips[cfg.encoder_strides.size() - 1 - j]);
  }
  y = plain_conv(plain_elu(y), w("gen.conv_out"), b("gen.conv_out"), 1, 1, 3, 1);
  for (auto& v : y.data) v = std::tanh(v);
  return y;
}

eben::Signal random_signal(std::size_t length, std::uint64_t seed,
                           int rate = 16000) {
  eben::Signal s;
  s.sample_rate_hz = rate;
  s.samples.resize(length);
  eben::Rng rng(seed);
  for (auto& v : s.samples) v = rng.uniform(-1.0, 1.0);
  return s;
}

// ---------------------------------------------------------------- criteria

// 1. near-perfect reconstruction: M in {2,4,8}, taps 8M, 50 white-noise
//    signals each, interior round-trip SNR >= 35 dB, under 30 s.
bool criterion_1(std::string& note) {
  double worst = 1e300;
  for (std::size_t m : {2u, 4u, 8u}) {
    const eben::PqmfBank bank = eben::design_bank(m, 8 * m);
    for (int trial = 0; trial < 50; ++trial) {
      const auto x =
          random_signal(16384, 1000 * m + static_cast<std::uint64_t>(trial));
      eben::Signal y = eben::synthesize(bank, eben::analyze(bank, x));
      y.samples.resize(x.samples.size());
      const std::size_t edge = bank.taps;
      const std::vector<double> ref(x.samples.begin() + edge,
                                    x.samples.end() - edge);
      const std::vector<double> est(y.samples.begin() + edge,
                                    y.samples.end() - edge);
      worst = std::min(worst, eben::snr_db(ref, est));
    }
  }
  note = "min round-trip SNR " + fmt(worst, 2) + " dB over 150 signals";
  return worst >= 35.0;
}

// 2. composite zero-phase lowpass: DC gain 0 dB +- 0.01, 1200 Hz at
//    -22.2 dB +- 2, lag-0 cross-correlation peak on 20 random inputs.
bool criterion_2(std::string& note) {
  const eben::DegradationConfig cfg;
  const auto db =
      eben::degradation_response_db(cfg, 16000.0, {0.0, 1200.0});
  if (std::abs(db[0]) > 0.01) {
    note = "DC response " + fmt(db[0], 5) + " dB";
    return false;
  }
  if (std::abs(db[1] - (-22.2)) > 2.0) {
    note = "1200 Hz response " + fmt(db[1], 2) + " dB";
    return false;
  }

  // realized DC gain on a constant signal
  eben::Signal dc;
  dc.sample_rate_hz = 16000;
  dc.samples.assign(4096, 0.25);
  const auto filtered_dc = eben::degrade(dc, cfg).filtered;
  double mean = 0.0;
  for (std::size_t i = 1024; i < 3072; ++i) mean += filtered_dc.samples[i];
  mean /= 2048.0;
  const double dc_gain_db = 20.0 * std::log10(mean / 0.25);
  if (std::abs(dc_gain_db) > 0.01) {
    note = "realized DC gain " + fmt(dc_gain_db, 5) + " dB";
    return false;
  }

  // zero phase: peak of the cross-correlation with the input sits at lag 0
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_signal(8192, 7000 + static_cast<std::uint64_t>(trial));
    const auto y = eben::degrade(x, cfg).filtered;
    int best_lag = -999;
    double best = -1.0;
    for (int lag = -32; lag <= 32; ++lag) {
      double acc = 0.0;
      for (std::size_t t = 64; t + 64 < x.samples.size(); ++t)
        acc += x.samples[t] *
               y.samples[static_cast<std::size_t>(static_cast<long>(t) + lag)];
      if (std::abs(acc) > best) {
        best = std::abs(acc);
        best_lag = lag;
      }
    }
    if (best_lag != 0) {
      note = "cross-correlation peak at lag " + std::to_string(best_lag);
      return false;
    }
  }
  note = "DC " + fmt(db[0], 4) + " dB, 1200 Hz " + fmt(db[1], 2) +
         " dB, 20/20 peaks at lag 0";
  return true;
}

// 3. noise sits 23 dB below the filtered signal power on a long clip.
bool criterion_3(std::string& note) {
  eben::SpeechConfig sc;
  sc.duration_s = 12.0;
  sc.seed = 7;
  const eben::Signal clean = eben::synthesize_speech(sc);
  const auto res = eben::degrade(clean, eben::DegradationConfig{});
  double noise_power = 0.0, signal_power = 0.0;
  for (std::size_t i = 0; i < clean.samples.size(); ++i) {
    const double n = res.degraded.samples[i] - res.filtered.samples[i];
    noise_power += n * n;
    signal_power += res.filtered.samples[i] * res.filtered.samples[i];
  }
  const double measured = 10.0 * std::log10(signal_power / noise_power);
  note = "measured noise depth " + fmt(measured, 3) + " dB on a 12 s clip";
  return std::abs(measured - 23.0) <= 0.5;
}

// 4. coherence of (clean, degraded): >= 0.95 below 400 Hz and <= 0.2 above
//    3 kHz with at least 30 Welch segments. The clean probe is broadband
//    noise: coherence is only estimable at frequencies the input excites,
//    and a flat spectrum exercises every bin. The DC bin is excluded: Welch
//    segments are mean-removed, so gamma^2 at 0 Hz estimates nothing.
bool criterion_4(std::string& note) {
  const eben::Signal clean = random_signal(192000, 404);
  const auto res = eben::degrade(clean, eben::DegradationConfig{});
  const auto est = eben::welch_cross(clean, res.degraded, eben::WelchConfig{});
  const auto coh = eben::coherence(est);
  if (est.num_segments < 30) {
    note = "only " + std::to_string(est.num_segments) + " segments";
    return false;
  }
  double min_low = 1.0, max_high = 0.0;
  for (std::size_t i = 0; i < coh.size(); ++i) {
    const double f = est.frequency_hz[i];
    if (f > 0.0 && f < 400.0) min_low = std::min(min_low, coh[i]);
    if (f > 3000.0) max_high = std::max(max_high, coh[i]);
  }
  note = "min gamma^2 " + fmt(min_low, 3) + " below 400 Hz, max " +
         fmt(max_high, 3) + " above 3 kHz, " +
         std::to_string(est.num_segments) + " segments";
  return min_low >= 0.95 && max_high <= 0.2;
}

// 5. SI-SDR closed forms: exact scale invariance and the 20 dB construction.
bool criterion_5(std::string& note) {
  eben::Rng rng(505);
  std::vector<double> ref(4096), noise(4096);
  for (auto& v : ref) v = rng.gaussian();
  for (auto& v : noise) v = rng.gaussian();
  double rr = 0.0, rn = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    rr += ref[i] * ref[i];
    rn += ref[i] * noise[i];
  }
  // orthogonalize the noise against the reference
  double nn = 0.0;
  for (std::size_t i = 0; i < noise.size(); ++i) {
    noise[i] -= rn / rr * ref[i];
    nn += noise[i] * noise[i];
  }
  // scale the orthogonal part to hold exactly 1/100 of the signal energy
  std::vector<double> est(4096);
  const double gain = std::sqrt(rr / (100.0 * nn));
  for (std::size_t i = 0; i < est.size(); ++i)
    est[i] = ref[i] + gain * noise[i];
  const double twenty = eben::si_sdr(ref, est);
  if (std::abs(twenty - 20.0) > 1e-6) {
    note = "orthogonal construction returned " + fmt(twenty, 9) + " dB";
    return false;
  }

  const double base = eben::si_sdr(ref, est);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double c = (trial % 2 == 0 ? 1.0 : -1.0) *
                     std::exp(rng.uniform(-6.0, 6.0));
    std::vector<double> scaled(est.size());
    for (std::size_t i = 0; i < est.size(); ++i) scaled[i] = c * est[i];
    worst = std::max(worst, std::abs(eben::si_sdr(ref, scaled) - base));
  }
  note = "construction " + fmt(twenty, 7) + " dB, max scale deviation " +
         fmt(worst * 1e12, 1) + "e-12 dB";
  return worst <= 1e-9;
}

// 6. STOI within 0.02 of the independent oracle on the 20 pinned pairs.
bool criterion_6(std::string& note) {
  std::ifstream in(std::string(EBEN_FIXTURES_DIR) + "/stoi_oracle.json");
  if (!in) {
    note = "missing fixture stoi_oracle.json";
    return false;
  }
  nlohmann::json j;
  in >> j;
  std::map<std::string, double> oracle;
  for (const auto& c : j.at("cases"))
    oracle[c.at("name").get<std::string>()] = c.at("stoi").get<double>();

  const auto cases = eben_tests::make_stoi_cases();
  if (cases.size() != oracle.size() || cases.size() != 20) {
    note = "case count mismatch";
    return false;
  }
  const double self =
      eben::stoi(cases[0].reference, cases[0].reference);
  if (std::abs(self - 1.0) > 1e-9) {
    note = "stoi(x, x) = " + fmt(self, 12);
    return false;
  }
  double worst = 0.0;
  std::string worst_name;
  for (const auto& c : cases) {
    const auto it = oracle.find(c.name);
    if (it == oracle.end()) {
      note = "no oracle value for " + c.name;
      return false;
    }
    const double mine = eben::stoi(c.reference, c.estimate);
    const double diff = std::abs(mine - it->second);
    if (diff > worst) {
      worst = diff;
      worst_name = c.name;
    }
  }
  note = "max |stoi - oracle| " + fmt(worst, 4) + " (" + worst_name +
         "), stoi(x,x) at 1 within 1e-9";
  return worst <= 0.02;
}

// 7. untrained baseline row: median STOI in [0.75, 0.90] and median SI-SDR
//    in [4, 13] dB over the ten simulated in-ear pairs.
bool criterion_7(std::string& note) {
  const auto cases = eben_tests::make_stoi_cases();
  std::vector<double> stois, sisdrs;
  for (const auto& c : cases) {
    if (c.name.rfind("degraded_", 0) != 0) continue;
    stois.push_back(eben::stoi(c.reference, c.estimate));
    sisdrs.push_back(eben::si_sdr(c.reference.samples, c.estimate.samples));
  }
  if (stois.size() < 10) {
    note = "only " + std::to_string(stois.size()) + " pairs";
    return false;
  }
  const double med_stoi = eben::quantile(stois, 0.5);
  const double med_sisdr = eben::quantile(sisdrs, 0.5);
  note = "median STOI " + fmt(med_stoi, 3) + ", median SI-SDR " +
         fmt(med_sisdr, 2) + " dB over " + std::to_string(stois.size()) +
         " pairs";
  return med_stoi >= 0.75 && med_stoi <= 0.90 && med_sisdr >= 4.0 &&
         med_sisdr <= 13.0;
}

// 8. loss formulas match naive-loop oracles on 200 randomized cases within
//    1e-10; the saturation points hold exactly.
bool criterion_8(std::string& note) {
  auto make_output = [](const std::vector<eben::Tensor>& feats) {
    eben::DiscriminatorOutput out;
    out.features = feats;
    return out;
  };
  auto constant_logits = [](double v) {
    eben::Tensor t({1, 5});
    for (auto& x : t.data) x = v;
    return t;
  };

  std::vector<eben::DiscriminatorOutput> strong_real, strong_fake, zeros, ones;
  for (int k = 0; k < 4; ++k) {
    strong_real.push_back(make_output({constant_logits(2.0)}));
    strong_fake.push_back(make_output({constant_logits(-2.0)}));
    zeros.push_back(make_output({constant_logits(0.0)}));
    ones.push_back(make_output({constant_logits(1.0)}));
  }
  if (eben::loss_discriminator(strong_real, strong_fake) != 0.0 ||
      eben::loss_discriminator(zeros, zeros) != 2.0 ||
      eben::loss_generator_adv(ones) != 0.0 ||
      eben::loss_generator_adv(zeros) != 1.0) {
    note = "saturation points off";
    return false;
  }
  // constant-offset feature matching: depths {7,6,6,6}, every layer gap 1
  std::vector<eben::DiscriminatorOutput> off_real, off_fake;
  for (std::size_t depth : {7u, 6u, 6u, 6u}) {
    std::vector<eben::Tensor> rf, ff;
    for (std::size_t l = 0; l < depth; ++l) {
      eben::Tensor t({2, 3});
      for (std::size_t i = 0; i < t.data.size(); ++i)
        t.data[i] = static_cast<double>(i % 8) / 8.0;
      rf.push_back(t);
      for (auto& v : t.data) v += 1.0;
      ff.push_back(t);
    }
    off_real.push_back(make_output(rf));
    off_fake.push_back(make_output(ff));
  }
  if (eben::loss_generator_rec(off_real, off_fake) != 5.25 ||
      eben::loss_generator_rec(off_real, off_real) != 0.0) {
    note = "constant-offset feature matching off";
    return false;
  }

  eben::Rng rng(808);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n_scales = 1 + static_cast<std::size_t>(rng.uniform() * 4.0);
    std::vector<eben::DiscriminatorOutput> real, fake;
    for (std::size_t k = 0; k < n_scales; ++k) {
      const std::size_t depth = 2 + static_cast<std::size_t>(rng.uniform() * 4.0);
      std::vector<eben::Tensor> rf, ff;
      for (std::size_t l = 0; l < depth; ++l) {
        const std::size_t c = 1 + static_cast<std::size_t>(rng.uniform() * 3.0);
        const std::size_t t = 1 + static_cast<std::size_t>(rng.uniform() * 6.0);
        eben::Tensor r({c, t}), f({c, t});
        for (auto& v : r.data) v = rng.uniform(-2.0, 2.0);
        for (auto& v : f.data) v = rng.uniform(-2.0, 2.0);
        rf.push_back(std::move(r));
        ff.push_back(std::move(f));
      }
      real.push_back(make_output(rf));
      fake.push_back(make_output(ff));
    }
    double want_ld = 0.0, want_adv = 0.0, want_rec = 0.0;
    for (std::size_t k = 0; k < n_scales; ++k) {
      const auto& rl = real[k].features.back().data;
      const auto& fl = fake[k].features.back().data;
      double hr = 0.0, hf = 0.0, hg = 0.0;
      for (double v : rl) hr += std::max(0.0, 1.0 - v);
      for (double v : fl) hf += std::max(0.0, 1.0 + v);
      for (double v : fl) hg += std::max(0.0, 1.0 - v);
      want_ld += hr / rl.size() + hf / fl.size();
      want_adv += hg / fl.size();
      for (std::size_t l = 0; l + 1 < real[k].features.size(); ++l) {
        const auto& r = real[k].features[l].data;
        const auto& f = fake[k].features[l].data;
        double gap = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) gap += std::abs(r[i] - f[i]);
        want_rec += gap / r.size();
      }
    }
    want_ld /= n_scales;
    want_adv /= n_scales;
    want_rec /= n_scales;
    worst = std::max(worst,
                     std::abs(eben::loss_discriminator(real, fake) - want_ld));
    worst = std::max(worst,
                     std::abs(eben::loss_generator_adv(fake) - want_adv));
    worst = std::max(
        worst, std::abs(eben::loss_generator_rec(real, fake) - want_rec));
  }
  note = "saturations exact, max |loss - oracle| " + fmt(worst * 1e12, 1) +
         "e-12 over 200 cases";
  return worst <= 1e-10;
}

// 9. architecture contracts: length preservation, band routing, exact zeros
//    from zero weights, and a straight-line forward-pass oracle.
bool criterion_9(std::string& note) {
  const eben::GeneratorConfig cfg;
  const eben::PqmfBank bank = eben::design_bank(cfg.num_bands);
  const auto store = eben::init_generator_weights(cfg, 17);

  for (std::size_t k = 1; k <= 20; ++k) {
    const auto x = random_signal(256 * k, 900 + k);
    const auto y = eben::enhance(cfg, store, bank, x);
    if (y.samples.size() != x.samples.size()) {
      note = "length " + std::to_string(x.samples.size()) + " came back as " +
             std::to_string(y.samples.size());
      return false;
    }
  }

  // discriminator scale views carry bands 1..3, never the generator's band 0
  const auto probe = random_signal(1024, 940);
  const auto sub = eben::analyze(bank, probe);
  for (std::size_t scale = 1; scale <= 3; ++scale) {
    const auto view = eben::discriminator_input(cfg, bank, probe, scale);
    const std::size_t band = cfg.bands_to_generator + scale - 1;
    bool equals_band = true, equals_band0 = true;
    for (std::size_t t = 0; t < sub.band_length(); ++t) {
      if (view.at(0, t) != sub.bands.at(band, t)) equals_band = false;
      if (view.at(0, t) != sub.bands.at(0, t)) equals_band0 = false;
    }
    if (!equals_band || equals_band0) {
      note = "scale " + std::to_string(scale) + " routed the wrong band";
      return false;
    }
  }

  eben::WeightStore zeros;
  for (const auto& plan : eben::generator_layer_plans(cfg)) {
    const std::size_t second = plan.transposed
                                   ? plan.spec.out_channels / plan.spec.groups
                                   : plan.spec.in_channels / plan.spec.groups;
    const std::size_t first =
        plan.transposed ? plan.spec.in_channels : plan.spec.out_channels;
    zeros.add(plan.name + ".weight",
              eben::Tensor({first, second, plan.spec.kernel_size}));
    zeros.add(plan.name + ".bias", eben::Tensor({plan.spec.out_channels}));
  }
  const auto silent = eben::enhance(cfg, zeros, bank, random_signal(2048, 941));
  for (double v : silent.samples)
    if (v != 0.0) {
      note = "zero weights leaked a nonzero sample";
      return false;
    }

  eben::Tensor input({1, 512});
  eben::Rng rng(942);
  for (auto& v : input.data) v = rng.uniform(-1.0, 1.0);
  const auto got = eben::generator_forward(cfg, store, input);
  const auto want = oracle_generator(cfg, store, input);
  double worst = 0.0;
  for (std::size_t i = 0; i < got.data.size(); ++i)
    worst = std::max(worst, std::abs(got.data[i] - want.data[i]));
  note = "20 lengths preserved, bands routed, zeros exact, forward within " +
         fmt(worst * 1e9, 1) + "e-9 of oracle";
  return worst <= 1e-6;
}

// 10. pinned parameter/latency constants; generator size in [0.5M, 5M];
//     interval arithmetic confirmed by impulse perturbation on enhance().
bool criterion_10(std::string& note) {
  const eben::GeneratorConfig cfg;
  const auto dcfg = eben::discriminator_config_for(cfg);
  const auto counts = eben::count_parameters(cfg, dcfg);
  if (counts.generator != 2429732u || counts.discriminators != 43204868u ||
      counts.total != 45634600u) {
    note = "parameter counts moved: generator " +
           std::to_string(counts.generator) + ", discriminators " +
           std::to_string(counts.discriminators);
    return false;
  }
  if (counts.generator < 500000u || counts.generator > 5000000u) {
    note = "generator size out of the expected order of magnitude";
    return false;
  }
  const auto rep = eben::report_latency(cfg, 32, 16000.0, 20.0);
  if (rep.lookahead_samples != 4963 || rep.history_samples != 4963 ||
      rep.receptive_field_samples != 9836 || rep.meets_target) {
    note = "latency report moved: lookahead " +
           std::to_string(rep.lookahead_samples) + ", history " +
           std::to_string(rep.history_samples) + ", receptive " +
           std::to_string(rep.receptive_field_samples);
    return false;
  }

  // impulse probing: scan one block for the extremal outputs, then perturb
  // the single input sample each one claims as its farthest dependency.
  // The store uses |weight| with zero biases: on an all-zero signal the
  // baseline is exactly zero everywhere, and a spike whose sign makes the
  // critical band sample positive rides the ELU identity branch along the
  // extremal path, so its influence stays a nonzero product of nonzero
  // doubles instead of rounding away under a large background value.
  const eben::PqmfBank bank = eben::design_bank(cfg.num_bands);
  eben::WeightStore store;
  {
    const auto seeded = eben::init_generator_weights(cfg, 3);
    for (const auto& plan : eben::generator_layer_plans(cfg)) {
      eben::Tensor w = seeded.get(plan.name + ".weight");
      for (auto& v : w.data) v = std::abs(v);
      store.add(plan.name + ".weight", std::move(w));
      store.add(plan.name + ".bias",
                eben::Tensor({plan.spec.out_channels}));
    }
  }
  const long long period =
      static_cast<long long>(cfg.num_bands * cfg.total_stride());
  const long long base = 6144;
  long long u_look = base, u_hist = base, scan_look = 0, scan_hist = 0;
  for (long long u = base; u < base + period; ++u) {
    const auto iv = eben::dependency_interval(cfg, bank.taps, u);
    if (iv.hi - u > scan_look) {
      scan_look = iv.hi - u;
      u_look = u;
    }
    if (u - iv.lo > scan_hist) {
      scan_hist = u - iv.lo;
      u_hist = u;
    }
  }
  if (scan_look != rep.lookahead_samples || scan_hist != rep.history_samples) {
    note = "interior scan disagrees with the report";
    return false;
  }

  eben::Signal zeros;
  zeros.sample_rate_hz = 16000;
  zeros.samples.assign(12800, 0.0);
  const auto baseline = eben::enhance(cfg, store, bank, zeros);
  for (double v : baseline.samples)
    if (v != 0.0) {
      note = "zero-bias baseline is not exactly zero";
      return false;
    }

  // the spike reaches the extremal band sample through one analysis tap;
  // pick the spike sign so that band sample comes out positive
  auto probe = [&](long long p, long long claimant, std::size_t critical_tap,
                   bool toward_future, std::string& why) {
    const double tap = bank.analysis_kernels.at(0, critical_tap);
    if (tap == 0.0) {
      why = "critical analysis tap is zero";
      return false;
    }
    eben::Signal xp = zeros;
    xp.samples[static_cast<std::size_t>(p)] = tap > 0.0 ? 0.5 : -0.5;
    const auto out = eben::enhance(cfg, store, bank, xp);
    long long first_changed = -1, last_changed = -1;
    for (std::size_t u = 0; u < out.samples.size(); ++u) {
      if (out.samples[u] == 0.0) continue;
      const auto iv =
          eben::dependency_interval(cfg, bank.taps, static_cast<long long>(u));
      if (p < iv.lo || p > iv.hi) {
        why = "output " + std::to_string(u) +
              " changed outside its predicted window";
        return false;
      }
      if (first_changed < 0) first_changed = static_cast<long long>(u);
      last_changed = static_cast<long long>(u);
    }
    const long long edge = toward_future ? first_changed : last_changed;
    if (edge != claimant) {
      why = "extreme changed output " + std::to_string(edge) + " != claimed " +
            std::to_string(claimant);
      return false;
    }
    const long long measured = toward_future ? p - edge : edge - p;
    const long long pinned =
        toward_future ? rep.lookahead_samples : rep.history_samples;
    if (measured != pinned) {
      why = "measured reach " + std::to_string(measured) + " != " +
            std::to_string(pinned);
      return false;
    }
    return true;
  };

  std::string why;
  const long long p_look = eben::dependency_interval(cfg, bank.taps, u_look).hi;
  if (!probe(p_look, u_look, bank.taps - 1, true, why)) {
    note = "lookahead probe: " + why;
    return false;
  }
  const long long p_hist = eben::dependency_interval(cfg, bank.taps, u_hist).lo;
  if (!probe(p_hist, u_hist, 0, false, why)) {
    note = "history probe: " + why;
    return false;
  }
  note = "counts 2429732/43204868, latency 4963/4963/9836 confirmed by probes";
  return true;
}

// 11. bit-exactness of the weights container, float32 WAV, and seeded noise.
bool criterion_11(std::string& note) {
  const eben::GeneratorConfig cfg;
  const auto store = eben::init_generator_weights(cfg, 23);
  const std::string w1 = scratch_path("acc_weights_1.ebwt");
  const std::string w2 = scratch_path("acc_weights_2.ebwt");
  eben::save_weights(store, w1);
  eben::save_weights(eben::load_weights(w1), w2);
  if (slurp(w1) != slurp(w2) || slurp(w1).empty()) {
    note = "weights round trip changed bytes";
    return false;
  }

  eben::SpeechConfig sc;
  sc.duration_s = 2.0;
  sc.seed = 11;
  const eben::Signal speech = eben::synthesize_speech(sc);
  const std::string a1 = scratch_path("acc_audio_1.wav");
  const std::string a2 = scratch_path("acc_audio_2.wav");
  eben::write_wav(speech, a1);
  const eben::Signal back = eben::read_wav(a1);
  eben::write_wav(back, a2);
  if (slurp(a1) != slurp(a2) || slurp(a1).empty()) {
    note = "float32 WAV round trip changed bytes";
    return false;
  }
  const eben::Signal back2 = eben::read_wav(a2);
  if (back.samples != back2.samples) {
    note = "WAV samples drifted across round trips";
    return false;
  }

  eben::DegradationConfig dc;
  dc.noise_seed = 99;
  const auto d1 = eben::degrade(speech, dc);
  const auto d2 = eben::degrade(speech, dc);
  if (d1.degraded.samples != d2.degraded.samples) {
    note = "seeded degradation is not reproducible";
    return false;
  }
  note = "weights, WAV, and seeded degradation byte-stable";
  return true;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* label;
    std::function<bool(std::string&)> fn;
    double budget_s;  // 0: no wall-clock bound
  };
  const std::vector<Entry> entries = {
      {1, "pqmf near-perfect reconstruction", criterion_1, 30.0},
      {2, "degradation filter correctness", criterion_2, 10.0},
      {3, "noise calibration", criterion_3, 5.0},
      {4, "coherence reproduction", criterion_4, 10.0},
      {5, "si-sdr closed forms", criterion_5, 0.0},
      {6, "stoi oracle agreement", criterion_6, 0.0},
      {7, "untrained baseline row", criterion_7, 60.0},
      {8, "loss-formula oracle equivalence", criterion_8, 0.0},
      {9, "architecture contracts", criterion_9, 0.0},
      {10, "parameter count and latency report", criterion_10, 0.0},
      {11, "bit-exactness", criterion_11, 0.0},
  };

  int failures = 0;
  for (const auto& e : entries) {
    std::string note;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
      ok = e.fn(note);
    } catch (const std::exception& ex) {
      note = std::string("exception: ") + ex.what();
      ok = false;
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (ok && e.budget_s > 0.0 && elapsed > e.budget_s) {
      ok = false;
      note += " [exceeded " + fmt(e.budget_s, 0) + " s budget]";
    }
    std::printf("%s  %2d  %-38s %s [%.1f s]\n", ok ? "PASS" : "FAIL", e.id,
                e.label, note.c_str(), elapsed);
    if (!ok) ++failures;
  }
  if (failures > 0) std::printf("%d of 11 criteria failed\n", failures);
  else std::printf("all 11 criteria passed\n");
  return failures == 0 ? 0 : 1;
}
