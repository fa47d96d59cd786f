#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "eben/conv.hpp"
#include "eben/errors.hpp"
#include "eben/pqmf.hpp"
#include "eben/rng.hpp"
#include "eben/signal.hpp"
#include "eben/weights.hpp"

namespace eben {

// U-Net style band generator: a strided convolutional encoder with dilated
// residual units, a narrow bottleneck, and a transposed-convolution decoder
// with additive skips. It consumes the lowest subbands and emits all bands.
struct GeneratorConfig {
  std::size_t num_bands = 4;           // analysis/synthesis bands (M)
  std::size_t bands_to_generator = 1;  // lowest bands fed into the network
  std::size_t base_channels = 32;
  std::size_t latent_channels = 128;   // bottleneck output width
  std::vector<std::size_t> encoder_strides = {2, 4, 8};
  std::vector<std::size_t> residual_dilations = {1, 3, 9};  // units per stage

  std::size_t total_stride() const {
    std::size_t p = 1;
    for (std::size_t s : encoder_strides) p *= s;
    return p;
  }
};

// One hinge discriminator per view of the signal: scale 0 sees the raw
// waveform; scale k >= 1 sees one upper subband. Band scales drop one
// strided stage since their input rate is num_bands times lower.
struct DiscriminatorConfig {
  std::size_t num_scales = 4;
  std::size_t base_channels = 16;
  std::size_t channel_growth = 4;
  std::size_t max_channels = 1024;
  std::size_t full_rate_stages = 4;
  std::size_t band_stages = 3;
  std::size_t stage_kernel = 41;
  std::size_t stage_stride = 4;
  std::size_t stage_groups = 4;
  double leaky_slope = 0.2;

  std::size_t stages_for_scale(std::size_t scale) const {
    return scale == 0 ? full_rate_stages : band_stages;
  }
};

inline DiscriminatorConfig discriminator_config_for(const GeneratorConfig& g) {
  DiscriminatorConfig d;
  d.num_scales = 1 + (g.num_bands - g.bands_to_generator);
  return d;
}

// A named convolution in declaration order; the shared description drives
// initialization, parameter counting, the forward pass, and latency analysis.
struct LayerPlan {
  std::string name;
  ConvSpec spec;
  bool transposed = false;

  std::size_t parameter_count() const {
    const std::size_t second =
        transposed ? spec.out_channels / spec.groups
                   : spec.in_channels / spec.groups;
    const std::size_t first = transposed ? spec.in_channels : spec.out_channels;
    return first * second * spec.kernel_size + spec.out_channels;
  }
};

namespace detail {

inline void validate_generator_config(const GeneratorConfig& cfg) {
  if (cfg.num_bands < 2) throw ConfigError("generator: num_bands must be >= 2");
  if (cfg.bands_to_generator == 0 || cfg.bands_to_generator >= cfg.num_bands)
    throw ConfigError("generator: bands_to_generator must lie in [1, num_bands)");
  if (cfg.base_channels == 0)
    throw ConfigError("generator: base_channels must be positive");
  if (cfg.latent_channels == 0)
    throw ConfigError("generator: latent_channels must be positive");
  if (cfg.encoder_strides.empty())
    throw ConfigError("generator: no encoder stages");
  for (std::size_t s : cfg.encoder_strides)
    if (s < 2 || s % 2 != 0)
      throw ConfigError("generator: encoder strides must be even and >= 2");
  if (cfg.residual_dilations.empty())
    throw ConfigError("generator: residual_dilations must be non-empty");
}

inline LayerPlan conv_plan(std::string name, std::size_t in, std::size_t out,
                           std::size_t kernel, std::size_t stride,
                           std::size_t dilation, std::size_t groups,
                           std::size_t pad_left, std::size_t pad_right,
                           bool transposed) {
  LayerPlan p;
  p.name = std::move(name);
  p.spec.in_channels = in;
  p.spec.out_channels = out;
  p.spec.kernel_size = kernel;
  p.spec.stride = stride;
  p.spec.dilation = dilation;
  p.spec.groups = groups;
  p.spec.pad_left = pad_left;
  p.spec.pad_right = pad_right;
  p.transposed = transposed;
  return p;
}

}  // namespace detail

inline std::vector<LayerPlan> generator_layer_plans(const GeneratorConfig& cfg) {
  detail::validate_generator_config(cfg);
  std::vector<LayerPlan> plans;
  std::size_t width = cfg.base_channels;
  plans.push_back(detail::conv_plan("gen.conv_in", cfg.bands_to_generator,
                                    width, 7, 1, 1, 1, 3, 3, false));
  for (std::size_t j = 0; j < cfg.encoder_strides.size(); ++j) {
    const std::size_t s = cfg.encoder_strides[j];
    const std::string stage = "gen.enc" + std::to_string(j);
    plans.push_back(detail::conv_plan(stage + ".down", width, 2 * width, 2 * s,
                                      s, 1, 1, s / 2, s / 2, false));
    width *= 2;
    for (std::size_t r = 0; r < cfg.residual_dilations.size(); ++r) {
      const std::size_t d = cfg.residual_dilations[r];
      const std::string unit = stage + ".res" + std::to_string(r);
      plans.push_back(detail::conv_plan(unit + ".conv1", width, width, 3, 1, d,
                                        1, d, d, false));
      plans.push_back(
          detail::conv_plan(unit + ".conv2", width, width, 1, 1, 1, 1, 0, 0, false));
    }
  }
  plans.push_back(detail::conv_plan("gen.bottleneck", width,
                                    cfg.latent_channels, 3, 1, 1, 1, 1, 1, false));
  plans.push_back(detail::conv_plan("gen.expand", cfg.latent_channels, width, 3,
                                    1, 1, 1, 1, 1, false));
  for (std::size_t j = 0; j < cfg.encoder_strides.size(); ++j) {
    const std::size_t s =
        cfg.encoder_strides[cfg.encoder_strides.size() - 1 - j];
    plans.push_back(detail::conv_plan("gen.dec" + std::to_string(j) + ".up",
                                      width, width / 2, 2 * s, s, 1, 1, s / 2,
                                      s / 2, true));
    width /= 2;
  }
  plans.push_back(detail::conv_plan("gen.conv_out", width, cfg.num_bands, 7, 1,
                                    1, 1, 3, 3, false));
  return plans;
}

inline std::vector<LayerPlan> discriminator_layer_plans(
    const DiscriminatorConfig& cfg, std::size_t scale) {
  if (scale >= cfg.num_scales)
    throw ArgumentError("discriminator scale out of range");
  std::vector<LayerPlan> plans;
  const std::string base = "disc" + std::to_string(scale);
  std::size_t layer = 0;
  auto name = [&] { return base + ".layer" + std::to_string(layer++); };

  std::size_t width = cfg.base_channels;
  plans.push_back(detail::conv_plan(name(), 1, width, 15, 1, 1, 1, 7, 7, false));
  for (std::size_t s = 0; s < cfg.stages_for_scale(scale); ++s) {
    const std::size_t next = std::min(width * cfg.channel_growth, cfg.max_channels);
    plans.push_back(detail::conv_plan(name(), width, next, cfg.stage_kernel,
                                      cfg.stage_stride, 1, cfg.stage_groups,
                                      (cfg.stage_kernel - 1) / 2,
                                      (cfg.stage_kernel - 1) / 2, false));
    width = next;
  }
  plans.push_back(detail::conv_plan(name(), width, width, 5, 1, 1, 1, 2, 2, false));
  plans.push_back(detail::conv_plan(name(), width, 1, 3, 1, 1, 1, 1, 1, false));
  return plans;
}

inline std::size_t count_parameters(const std::vector<LayerPlan>& plans) {
  std::size_t n = 0;
  for (const auto& p : plans) n += p.parameter_count();
  return n;
}

inline std::size_t count_generator_parameters(const GeneratorConfig& cfg) {
  if (cfg.num_bands == 0) return 0;  // a band-less config has no layers
  return count_parameters(generator_layer_plans(cfg));
}

inline std::size_t count_discriminator_parameters(const DiscriminatorConfig& cfg) {
  std::size_t n = 0;
  for (std::size_t k = 0; k < cfg.num_scales; ++k)
    n += count_parameters(discriminator_layer_plans(cfg, k));
  return n;
}

struct ParameterCounts {
  std::size_t generator = 0;
  std::size_t discriminators = 0;
  std::size_t total = 0;
};

inline ParameterCounts count_parameters(const GeneratorConfig& gen_cfg,
                                        const DiscriminatorConfig& disc_cfg) {
  ParameterCounts c;
  c.generator = count_generator_parameters(gen_cfg);
  c.discriminators = count_discriminator_parameters(disc_cfg);
  c.total = c.generator + c.discriminators;
  return c;
}

namespace detail {

// Uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) for weight and bias, where
// fan_in is the stored weight's second extent times the kernel size. Draws
// happen in declaration order, weight before bias, and every value is
// rounded through float32 so serialized weights reload bit-exactly.
inline void init_layer(WeightStore& store, const LayerPlan& plan, Rng& rng) {
  const std::size_t second = plan.transposed
                                 ? plan.spec.out_channels / plan.spec.groups
                                 : plan.spec.in_channels / plan.spec.groups;
  const std::size_t first =
      plan.transposed ? plan.spec.in_channels : plan.spec.out_channels;
  const double bound = 1.0 / std::sqrt(static_cast<double>(second) *
                                       static_cast<double>(plan.spec.kernel_size));
  Tensor weight({first, second, plan.spec.kernel_size});
  for (auto& v : weight.data)
    v = static_cast<double>(static_cast<float>(rng.uniform(-bound, bound)));
  Tensor bias({plan.spec.out_channels});
  for (auto& v : bias.data)
    v = static_cast<double>(static_cast<float>(rng.uniform(-bound, bound)));
  store.add(plan.name + ".weight", std::move(weight));
  store.add(plan.name + ".bias", std::move(bias));
}

inline Tensor elu(Tensor t) {
  for (auto& v : t.data) v = v > 0.0 ? v : std::expm1(v);
  return t;
}

inline Tensor tanh_map(Tensor t) {
  for (auto& v : t.data) v = std::tanh(v);
  return t;
}

inline Tensor leaky_relu(Tensor t, double slope) {
  for (auto& v : t.data) v = v > 0.0 ? v : slope * v;
  return t;
}

inline Tensor add(const Tensor& a, const Tensor& b) {
  if (a.shape != b.shape) throw ShapeError("skip connection shape mismatch");
  Tensor out = a;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
  return out;
}

// Weight lookup with the exact shape the plan implies; a missing or
// mis-shaped entry names itself so load problems are actionable.
inline const Tensor& fetch_weight(const WeightStore& store,
                                  const std::string& name,
                                  const std::vector<std::size_t>& shape) {
  const Tensor& t = store.get(name);
  if (t.shape != shape) {
    std::string msg = "weight '" + name + "' has shape [";
    for (std::size_t i = 0; i < t.shape.size(); ++i)
      msg += (i ? "," : "") + std::to_string(t.shape[i]);
    msg += "], expected [";
    for (std::size_t i = 0; i < shape.size(); ++i)
      msg += (i ? "," : "") + std::to_string(shape[i]);
    msg += "]";
    throw LoadError(msg);
  }
  return t;
}

inline Tensor apply_layer(const LayerPlan& plan, const WeightStore& store,
                          const Tensor& input) {
  const std::size_t second = plan.transposed
                                 ? plan.spec.out_channels / plan.spec.groups
                                 : plan.spec.in_channels / plan.spec.groups;
  const std::size_t first =
      plan.transposed ? plan.spec.in_channels : plan.spec.out_channels;
  const Tensor& w = fetch_weight(store, plan.name + ".weight",
                                 {first, second, plan.spec.kernel_size});
  const Tensor& b =
      fetch_weight(store, plan.name + ".bias", {plan.spec.out_channels});
  return plan.transposed ? conv1d_transposed(input, w, b.data, plan.spec)
                         : conv1d(input, w, b.data, plan.spec);
}

}  // namespace detail

inline WeightStore init_generator_weights(const GeneratorConfig& cfg,
                                          std::uint64_t seed) {
  WeightStore store;
  Rng rng(seed);
  for (const auto& plan : generator_layer_plans(cfg))
    detail::init_layer(store, plan, rng);
  return store;
}

inline WeightStore init_discriminator_weights(const DiscriminatorConfig& cfg,
                                              std::uint64_t seed) {
  WeightStore store;
  Rng rng(seed);
  for (std::size_t k = 0; k < cfg.num_scales; ++k)
    for (const auto& plan : discriminator_layer_plans(cfg, k))
      detail::init_layer(store, plan, rng);
  return store;
}

// Generator then discriminator layers from one seeded stream, so a single
// file carries a complete model.
inline WeightStore init_model_weights(const GeneratorConfig& gen_cfg,
                                      const DiscriminatorConfig& disc_cfg,
                                      std::uint64_t seed) {
  WeightStore store;
  Rng rng(seed);
  for (const auto& plan : generator_layer_plans(gen_cfg))
    detail::init_layer(store, plan, rng);
  for (std::size_t k = 0; k < disc_cfg.num_scales; ++k)
    for (const auto& plan : discriminator_layer_plans(disc_cfg, k))
      detail::init_layer(store, plan, rng);
  return store;
}

// Band routing: the lowest bands_to_generator bands drive the generator,
// the remaining upper bands (ascending frequency) go to the subband
// discriminators, one band per scale.
struct SplitBands {
  Tensor generator_input;
  Tensor discriminator_bands;
};

inline SplitBands split_bands(const Subbands& sub,
                              const GeneratorConfig& gen_cfg,
                              const DiscriminatorConfig& disc_cfg) {
  if (sub.num_bands != gen_cfg.num_bands)
    throw ShapeError("split_bands: subband count does not match config");
  if (gen_cfg.bands_to_generator == 0 ||
      gen_cfg.bands_to_generator >= gen_cfg.num_bands)
    throw ConfigError("split_bands: bands_to_generator must lie in [1, num_bands)");
  if (disc_cfg.num_scales == 0 ||
      gen_cfg.num_bands - gen_cfg.bands_to_generator != disc_cfg.num_scales - 1)
    throw ConfigError(
        "split_bands: leftover bands must match the subband discriminator count");
  const std::size_t low = gen_cfg.bands_to_generator;
  const std::size_t high = gen_cfg.num_bands - low;
  const std::size_t length = sub.band_length();
  SplitBands out;
  out.generator_input = Tensor({low, length});
  out.discriminator_bands = Tensor({high, length});
  for (std::size_t b = 0; b < low; ++b)
    for (std::size_t t = 0; t < length; ++t)
      out.generator_input.at(b, t) = sub.bands.at(b, t);
  for (std::size_t b = 0; b < high; ++b)
    for (std::size_t t = 0; t < length; ++t)
      out.discriminator_bands.at(b, t) = sub.bands.at(low + b, t);
  return out;
}

// Runs the generator on [bands_to_generator, L] subband frames; L must be a
// multiple of the total stride. Returns [num_bands, L] in (-1, 1).
inline Tensor generator_forward(const GeneratorConfig& cfg,
                                const WeightStore& store, const Tensor& input) {
  detail::validate_generator_config(cfg);
  if (input.rank() != 2 || input.shape[0] != cfg.bands_to_generator)
    throw ShapeError("generator input must be [bands_to_generator, frames]");
  if (input.shape[1] == 0 || input.shape[1] % cfg.total_stride() != 0)
    throw ShapeError("generator input length must be a positive multiple of " +
                     std::to_string(cfg.total_stride()));

  const auto plans = generator_layer_plans(cfg);
  std::size_t idx = 0;
  auto next = [&]() -> const LayerPlan& { return plans[idx++]; };

  Tensor x = detail::apply_layer(next(), store, input);  // conv_in
  std::vector<Tensor> skips;
  skips.push_back(x);
  const std::size_t n_units = cfg.residual_dilations.size();
  const std::size_t stages = cfg.encoder_strides.size();
  for (std::size_t j = 0; j < stages; ++j) {
    x = detail::apply_layer(next(), store, detail::elu(x));  // down
    for (std::size_t r = 0; r < n_units; ++r) {
      Tensor h = detail::apply_layer(next(), store, detail::elu(x));  // conv1
      h = detail::apply_layer(next(), store, detail::elu(h));         // conv2
      x = detail::add(x, h);
    }
    skips.push_back(x);
  }
  Tensor b = detail::apply_layer(next(), store, detail::elu(x));  // bottleneck
  Tensor y = detail::apply_layer(next(), store, detail::elu(b));  // expand
  y = detail::add(y, skips[stages]);
  for (std::size_t j = 0; j < stages; ++j) {
    y = detail::apply_layer(next(), store, detail::elu(y));  // up
    y = detail::add(y, skips[stages - 1 - j]);
  }
  y = detail::apply_layer(next(), store, detail::elu(y));  // conv_out
  return detail::tanh_map(std::move(y));
}

// Every layer's output in declaration order: intermediate entries are
// post-activation feature maps, the final entry is the raw logit row. The
// feature-matching loss runs over everything except that final entry.
struct DiscriminatorOutput {
  std::vector<Tensor> features;

  const Tensor& logits() const {
    if (features.empty())
      throw ArgumentError("discriminator output holds no layers");
    return features.back();
  }
};

inline DiscriminatorOutput discriminator_forward(const DiscriminatorConfig& cfg,
                                                 const WeightStore& store,
                                                 std::size_t scale,
                                                 const Tensor& input) {
  if (input.rank() != 2 || input.shape[0] != 1)
    throw ShapeError("discriminator input must be [1, samples]");
  if (input.shape[1] == 0)
    throw ShapeError("discriminator input must be non-empty");
  const auto plans = discriminator_layer_plans(cfg, scale);
  DiscriminatorOutput out;
  out.features.reserve(plans.size());
  Tensor x = input;
  for (std::size_t l = 0; l < plans.size(); ++l) {
    x = detail::apply_layer(plans[l], store, x);
    if (l + 1 < plans.size()) x = detail::leaky_relu(std::move(x), cfg.leaky_slope);
    out.features.push_back(x);
  }
  return out;
}

// Full enhancement: decompose, run the generator on the lowest bands,
// resynthesize all bands. The input length must be a positive multiple of
// num_bands * total_stride so every stage lands on whole frames; the output
// then has exactly the input length.
inline Signal enhance(const GeneratorConfig& cfg, const WeightStore& store,
                      const PqmfBank& bank, const Signal& input) {
  if (bank.num_bands != cfg.num_bands)
    throw ConfigError("bank band count does not match generator config");
  const std::size_t block = cfg.num_bands * cfg.total_stride();
  if (input.samples.empty() || input.samples.size() % block != 0)
    throw ArgumentError("enhance: input length must be a positive multiple of " +
                        std::to_string(block));

  const Subbands sub = analyze(bank, input);
  Tensor in_bands({cfg.bands_to_generator, sub.band_length()});
  for (std::size_t b = 0; b < cfg.bands_to_generator; ++b)
    for (std::size_t t = 0; t < sub.band_length(); ++t)
      in_bands.at(b, t) = sub.bands.at(b, t);

  Subbands gen;
  gen.bands = generator_forward(cfg, store, in_bands);
  gen.sample_rate_hz = input.sample_rate_hz;
  gen.num_bands = cfg.num_bands;
  gen.original_length = input.samples.size();

  return synthesize(bank, gen);
}

// The discriminator scale views: scale 0 the waveform itself, scale k >= 1
// the (bands_to_generator + k - 1)-th analysis band.
inline Tensor discriminator_input(const GeneratorConfig& gen_cfg,
                                  const PqmfBank& bank, const Signal& signal,
                                  std::size_t scale) {
  if (scale == 0) {
    Tensor t({1, signal.samples.size()});
    t.data = signal.samples;
    return t;
  }
  const std::size_t band = gen_cfg.bands_to_generator + scale - 1;
  if (band >= bank.num_bands)
    throw ArgumentError("discriminator scale maps past the last band");
  const Subbands sub = analyze(bank, signal);
  Tensor t({1, sub.band_length()});
  for (std::size_t i = 0; i < sub.band_length(); ++i)
    t.data[i] = sub.bands.at(band, i);
  return t;
}

namespace detail {

inline double mean_hinge(const Tensor& logits, double sign) {
  if (logits.data.empty())
    throw ArgumentError("hinge loss over empty logits");
  double acc = 0.0;
  for (double v : logits.data) acc += std::max(0.0, 1.0 + sign * v);
  return acc / static_cast<double>(logits.data.size());
}

inline void check_scale_counts(const std::vector<DiscriminatorOutput>& real,
                               const std::vector<DiscriminatorOutput>& fake,
                               const char* who) {
  if (real.empty() || real.size() != fake.size())
    throw ArgumentError(std::string(who) +
                        ": need matching non-empty output lists");
}

}  // namespace detail

// Hinge discriminator loss, averaged per scale over logit time steps:
// mean(max(0, 1 - D(y))) + mean(max(0, 1 + D(G(x)))), then over scales.
inline double loss_discriminator(const std::vector<DiscriminatorOutput>& real,
                                 const std::vector<DiscriminatorOutput>& fake) {
  detail::check_scale_counts(real, fake, "loss_discriminator");
  double acc = 0.0;
  for (std::size_t k = 0; k < real.size(); ++k) {
    if (real[k].logits().shape != fake[k].logits().shape)
      throw ShapeError("loss_discriminator: logits shapes differ at scale " +
                       std::to_string(k));
    acc += detail::mean_hinge(real[k].logits(), -1.0) +
           detail::mean_hinge(fake[k].logits(), +1.0);
  }
  return acc / static_cast<double>(real.size());
}

// Adversarial generator loss: mean(max(0, 1 - D(G(x)))) per scale, averaged
// over scales.
inline double loss_generator_adv(const std::vector<DiscriminatorOutput>& fake) {
  if (fake.empty())
    throw ArgumentError("loss_generator_adv: empty output list");
  double acc = 0.0;
  for (const auto& out : fake) acc += detail::mean_hinge(out.logits(), -1.0);
  return acc / static_cast<double>(fake.size());
}

// Feature-matching loss: per scale, the L1 gap between real and fake feature
// maps normalized by each map's element count, summed over every layer
// except the final logit entry, then averaged over scales.
inline double loss_generator_rec(const std::vector<DiscriminatorOutput>& real,
                                 const std::vector<DiscriminatorOutput>& fake) {
  detail::check_scale_counts(real, fake, "loss_generator_rec");
  double acc = 0.0;
  for (std::size_t k = 0; k < real.size(); ++k) {
    const auto& rf = real[k].features;
    const auto& ff = fake[k].features;
    if (rf.empty() || rf.size() != ff.size())
      throw ShapeError("loss_generator_rec: feature depths differ at scale " +
                       std::to_string(k));
    for (std::size_t l = 0; l + 1 < rf.size(); ++l) {
      if (rf[l].shape != ff[l].shape)
        throw ShapeError("loss_generator_rec: feature shapes differ at scale " +
                         std::to_string(k) + ", layer " + std::to_string(l));
      double layer = 0.0;
      for (std::size_t i = 0; i < rf[l].data.size(); ++i)
        layer += std::abs(rf[l].data[i] - ff[l].data[i]);
      acc += layer / static_cast<double>(rf[l].data.size());
    }
  }
  return acc / static_cast<double>(real.size());
}

struct LossBreakdown {
  double l_d = 0.0;      // hinge loss on real and generated audio
  double l_g_adv = 0.0;  // hinge loss steering the generator
  double l_g_rec = 0.0;  // feature-matching L1 across scales
  double lambda = 100.0;
  double l_g = 0.0;      // l_g_adv + lambda * l_g_rec
};

inline LossBreakdown loss_generator_total(double adv, double rec,
                                          double lambda = 100.0) {
  if (adv < 0.0 || rec < 0.0 || lambda < 0.0)
    throw ArgumentError("loss_generator_total: negative inputs");
  LossBreakdown b;
  b.l_g_adv = adv;
  b.l_g_rec = rec;
  b.lambda = lambda;
  b.l_g = adv + lambda * rec;
  return b;
}

// End-to-end loss evaluation for a (clean, enhanced) pair: route each signal
// through every discriminator view, then aggregate all three losses.
inline LossBreakdown gan_losses(const GeneratorConfig& gen_cfg,
                                const DiscriminatorConfig& disc_cfg,
                                const WeightStore& disc_store,
                                const PqmfBank& bank, const Signal& clean,
                                const Signal& enhanced, double lambda = 100.0) {
  if (clean.samples.size() != enhanced.samples.size())
    throw ShapeError("gan_losses: signal lengths differ");
  if (clean.samples.empty())
    throw DegenerateInputError("gan_losses: empty signals");

  std::vector<DiscriminatorOutput> real, fake;
  real.reserve(disc_cfg.num_scales);
  fake.reserve(disc_cfg.num_scales);
  for (std::size_t k = 0; k < disc_cfg.num_scales; ++k) {
    real.push_back(discriminator_forward(
        disc_cfg, disc_store, k, discriminator_input(gen_cfg, bank, clean, k)));
    fake.push_back(discriminator_forward(
        disc_cfg, disc_store, k,
        discriminator_input(gen_cfg, bank, enhanced, k)));
  }
  LossBreakdown b = loss_generator_total(loss_generator_adv(fake),
                                         loss_generator_rec(real, fake), lambda);
  b.l_d = loss_discriminator(real, fake);
  return b;
}

// ---------------------------------------------------------------------------
// Latency analysis: exact dependency intervals by interval arithmetic.

struct SampleInterval {
  long long lo = 0;
  long long hi = 0;
};

namespace detail {

inline long long floor_div(long long a, long long b) {
  long long q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

inline long long ceil_div(long long a, long long b) {
  return -floor_div(-a, b);
}

// Input positions a convolution output interval can depend on.
inline SampleInterval back_conv(SampleInterval iv, const ConvSpec& s) {
  const long long k = static_cast<long long>(s.kernel_size);
  const long long d = static_cast<long long>(s.dilation);
  const long long st = static_cast<long long>(s.stride);
  const long long pl = static_cast<long long>(s.pad_left);
  return {iv.lo * st - pl, iv.hi * st - pl + (k - 1) * d};
}

// Input positions a transposed-convolution output interval can depend on.
inline SampleInterval back_tconv(SampleInterval iv, const ConvSpec& s) {
  const long long k = static_cast<long long>(s.kernel_size);
  const long long st = static_cast<long long>(s.stride);
  const long long pl = static_cast<long long>(s.pad_left);
  return {ceil_div(iv.lo + pl - (k - 1), st), floor_div(iv.hi + pl, st)};
}

inline SampleInterval hull(SampleInterval a, SampleInterval b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

}  // namespace detail

// Exact interval of input-signal samples that can influence output sample u
// of the full enhance() chain (analysis, generator with skips, synthesis).
// Skip joins take the interval hull, walking nodes in reverse topological
// order so every consumer is folded in before a node propagates backward.
inline SampleInterval dependency_interval(const GeneratorConfig& cfg,
                                          std::size_t bank_taps,
                                          long long output_index) {
  detail::validate_generator_config(cfg);
  const auto plans = generator_layer_plans(cfg);
  auto plan = [&](const std::string& name) -> const LayerPlan& {
    for (const auto& p : plans)
      if (p.name == name) return p;
    throw Error("unknown layer plan '" + name + "'");
  };

  const long long m = static_cast<long long>(cfg.num_bands);
  const long long n = static_cast<long long>(bank_taps);
  const long long pad_a = (n - m) / 2;

  // synthesis: output u reads transposed-conv output u + pad_a
  ConvSpec synth;
  synth.in_channels = 1;
  synth.out_channels = 1;
  synth.kernel_size = static_cast<std::size_t>(n);
  synth.stride = static_cast<std::size_t>(m);
  SampleInterval iv_out = detail::back_tconv(
      {output_index + pad_a, output_index + pad_a}, synth);

  const std::size_t stages = cfg.encoder_strides.size();
  // generator backward: conv_out -> decoder -> bottleneck/expand -> encoder
  SampleInterval iv = detail::back_conv(iv_out, plan("gen.conv_out").spec);

  std::vector<SampleInterval> skip(stages + 1, {0, 0});
  std::vector<bool> skip_set(stages + 1, false);
  auto fold_skip = [&](std::size_t idx, SampleInterval v) {
    skip[idx] = skip_set[idx] ? detail::hull(skip[idx], v) : v;
    skip_set[idx] = true;
  };

  for (std::size_t j = stages; j-- > 0;) {  // undo the last decoder stage first
    fold_skip(stages - 1 - j, iv);  // additive skip into this decoder output
    iv = detail::back_tconv(iv, plan("gen.dec" + std::to_string(j) + ".up").spec);
  }
  fold_skip(stages, iv);  // expand's additive skip
  iv = detail::back_conv(iv, plan("gen.expand").spec);
  iv = detail::back_conv(iv, plan("gen.bottleneck").spec);
  fold_skip(stages, iv);

  // encoder backward, folding the decoder's skip reads stage by stage
  iv = skip[stages];
  for (std::size_t j = stages; j-- > 0;) {
    const std::string stage = "gen.enc" + std::to_string(j);
    for (std::size_t r = cfg.residual_dilations.size(); r-- > 0;) {
      const std::string unit = stage + ".res" + std::to_string(r);
      SampleInterval through = detail::back_conv(iv, plan(unit + ".conv2").spec);
      through = detail::back_conv(through, plan(unit + ".conv1").spec);
      iv = detail::hull(iv, through);  // residual adds the unit input directly
    }
    iv = detail::back_conv(iv, plan(stage + ".down").spec);
    iv = detail::hull(iv, skip[j]);
  }
  iv = detail::back_conv(iv, plan("gen.conv_in").spec);

  // analysis convolution back to raw samples
  ConvSpec ana;
  ana.in_channels = 1;
  ana.out_channels = 1;
  ana.kernel_size = static_cast<std::size_t>(n);
  ana.stride = static_cast<std::size_t>(m);
  ana.pad_left = static_cast<std::size_t>(pad_a);
  return detail::back_conv(iv, ana);
}

struct LatencyReport {
  long long lookahead_samples = 0;        // future samples an output can use
  long long history_samples = 0;          // past samples an output can use
  long long receptive_field_samples = 0;  // widest dependency window
  double lookahead_ms = 0.0;
  double target_ms = 20.0;
  bool meets_target = false;
};

inline LatencyReport report_latency(const GeneratorConfig& cfg,
                                    std::size_t bank_taps,
                                    double sample_rate_hz,
                                    double target_ms = 20.0) {
  if (sample_rate_hz <= 0.0) throw ArgumentError("sample rate must be positive");
  LatencyReport rep;
  rep.target_ms = target_ms;
  const long long period =
      static_cast<long long>(cfg.num_bands * cfg.total_stride());
  const long long base = 1LL << 22;  // far from the signal start
  for (long long u = base; u < base + period; ++u) {
    const SampleInterval iv = dependency_interval(cfg, bank_taps, u);
    rep.lookahead_samples = std::max(rep.lookahead_samples, iv.hi - u);
    rep.history_samples = std::max(rep.history_samples, u - iv.lo);
    rep.receptive_field_samples =
        std::max(rep.receptive_field_samples, iv.hi - iv.lo + 1);
  }
  rep.lookahead_ms = 1000.0 * static_cast<double>(rep.lookahead_samples) /
                     sample_rate_hz;
  rep.meets_target = rep.lookahead_ms <= target_ms;
  return rep;
}

inline LatencyReport report_latency(const GeneratorConfig& cfg,
                                    const PqmfBank& bank,
                                    double sample_rate_hz,
                                    double target_ms = 20.0) {
  if (bank.num_bands != cfg.num_bands)
    throw ConfigError("bank band count does not match generator config");
  return report_latency(cfg, bank.taps, sample_rate_hz, target_ms);
}

}  // namespace eben
