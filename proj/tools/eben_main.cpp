// Command-line front end for the bandwidth-extension toolkit: filter-bank
// design and round trips, in-ear degradation simulation, cross-spectral
// analysis, objective metrics, and the band generator/discriminator stack.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eben/eben.hpp"

namespace {

using nlohmann::json;

// exit codes: 0 success, 1 usage, 2 rejected input data, 3 internal fault
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

// EBEN_LOG=debug turns on progress notes; everything goes to stderr so
// stdout stays a clean data channel.
bool log_enabled() {
  const char* v = std::getenv("EBEN_LOG");
  return v != nullptr && (std::string(v) == "debug" || std::string(v) == "info");
}

void log_note(const std::string& msg) {
  if (log_enabled()) std::cerr << "eben: " << msg << "\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw eben::IoError("cannot open '" + path + "' for writing");
  return out;
}

void emit(const json& j, bool as_json) {
  if (as_json) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  for (const auto& [key, value] : j.items())
    std::cout << key << " = " << value.dump() << "\n";
}

// ---------------------------------------------------------------------- pqmf

struct PqmfDesignArgs {
  std::size_t bands = 4;
  std::size_t taps = 0;  // 0: use 8 * bands
  double attenuation_db = 100.0;
  std::string out_path;
  bool as_json = false;
};

void run_pqmf_design(const PqmfDesignArgs& a) {
  const eben::PqmfBank bank = eben::design_bank(a.bands, a.taps, a.attenuation_db);
  eben::save_bank(bank, a.out_path);
  emit({{"bands", bank.num_bands},
        {"taps", bank.taps},
        {"cutoff", bank.cutoff},
        {"reconstruction_snr_db", bank.reconstruction_snr_db},
        {"file", a.out_path}},
       a.as_json);
}

// A bank comes from --bank when given, otherwise it is designed on the spot.
eben::PqmfBank bank_from_flags(const std::string& bank_path, std::size_t bands,
                               std::size_t taps) {
  if (!bank_path.empty()) return eben::load_bank(bank_path);
  log_note("designing " + std::to_string(bands) + "-band bank inline");
  return eben::design_bank(bands, taps);
}

struct PqmfRoundtripArgs {
  std::string bank_path, in_path, out_path;
  std::size_t bands = 4;
  std::size_t taps = 0;
  bool as_json = false;
};

void run_pqmf_roundtrip(const PqmfRoundtripArgs& a) {
  const eben::PqmfBank bank = bank_from_flags(a.bank_path, a.bands, a.taps);
  const eben::Signal in = eben::read_wav(a.in_path);
  const eben::Signal out = eben::synthesize(bank, eben::analyze(bank, in));
  eben::Signal trimmed = out;
  trimmed.samples.resize(in.samples.size());
  if (!a.out_path.empty()) eben::write_wav(trimmed, a.out_path);
  // the filter edges never see a full kernel, so score the interior
  const std::size_t edge = bank.taps;
  double snr = -300.0;
  if (in.samples.size() > 2 * edge) {
    std::vector<double> ref(in.samples.begin() + edge, in.samples.end() - edge);
    std::vector<double> est(trimmed.samples.begin() + edge,
                            trimmed.samples.end() - edge);
    snr = eben::snr_db(ref, est);
  }
  emit({{"samples", in.samples.size()},
        {"snr_db", snr},
        {"edge_excluded_samples", edge}},
       a.as_json);
}

struct PqmfResponseArgs {
  std::string bank_path, out_path;
  std::size_t bands = 4;
  std::size_t taps = 0;
  std::size_t band = 0;
  std::size_t points = 512;
  bool as_json = false;
};

void run_pqmf_response(const PqmfResponseArgs& a) {
  const eben::PqmfBank bank = bank_from_flags(a.bank_path, a.bands, a.taps);
  const eben::BandResponse resp =
      eben::band_frequency_response(bank, a.band, a.points);
  if (!a.out_path.empty()) {
    auto out = open_out(a.out_path);
    out << "normalized_frequency,magnitude_db\n";
    for (std::size_t i = 0; i < resp.normalized_frequency.size(); ++i)
      out << resp.normalized_frequency[i] << "," << resp.magnitude_db[i] << "\n";
  }
  if (a.as_json) {
    emit({{"normalized_frequency", resp.normalized_frequency},
          {"magnitude_db", resp.magnitude_db}},
         true);
  } else if (a.out_path.empty()) {
    for (std::size_t i = 0; i < resp.normalized_frequency.size(); ++i)
      std::cout << resp.normalized_frequency[i] << "," << resp.magnitude_db[i]
                << "\n";
  }
}

// -------------------------------------------------------------------- degrade

struct DegradeArgs {
  std::string in_path, out_path, filtered_path, response_path;
  eben::DegradationConfig config;
  std::string noise_ref = "filtered";
  bool as_json = false;
};

void run_degrade(DegradeArgs a) {
  if (a.noise_ref == "clean")
    a.config.noise_relative_to_clean = true;
  else if (a.noise_ref != "filtered")
    throw eben::ArgumentError("--noise-ref must be 'filtered' or 'clean'");
  const eben::Signal in = eben::read_wav(a.in_path);
  const eben::DegradationResult res = eben::degrade(in, a.config);
  eben::write_wav(res.degraded, a.out_path);
  if (!a.filtered_path.empty()) eben::write_wav(res.filtered, a.filtered_path);
  if (!a.response_path.empty()) {
    std::vector<double> freqs;
    for (int f = 0; f <= in.sample_rate_hz / 2; f += 2)
      freqs.push_back(static_cast<double>(f));
    const auto db = eben::degradation_response_db(
        a.config, static_cast<double>(in.sample_rate_hz), freqs);
    auto out = open_out(a.response_path);
    out << "frequency_hz,composite_db\n";
    for (std::size_t i = 0; i < freqs.size(); ++i)
      out << freqs[i] << "," << db[i] << "\n";
  }
  // measure the realized noise against the configured reference power
  double noise_power = 0.0;
  for (std::size_t i = 0; i < res.degraded.samples.size(); ++i) {
    const double d = res.degraded.samples[i] - res.filtered.samples[i];
    noise_power += d * d;
  }
  noise_power /= static_cast<double>(res.degraded.samples.size());
  const double ref_power =
      a.config.noise_relative_to_clean ? res.clean_power : res.filtered_power;
  const double measured_snr_db =
      noise_power > 0.0 ? 10.0 * std::log10(ref_power / noise_power) : 300.0;
  emit({{"samples", in.samples.size()},
        {"noise_sigma", res.noise_sigma},
        {"filtered_power", res.filtered_power},
        {"clean_power", res.clean_power},
        {"measured_snr_db", measured_snr_db},
        {"file", a.out_path}},
       a.as_json);
}

// -------------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string ref_path, est_path, out_path;
  std::size_t segment = 1024;
  double overlap = 0.5;
  bool as_json = false;
};

eben::SpectralEstimate analyze_common(const AnalyzeArgs& a) {
  const eben::Signal ref = eben::read_wav(a.ref_path);
  const eben::Signal est = eben::read_wav(a.est_path);
  eben::WelchConfig cfg;
  cfg.segment_length = a.segment;
  cfg.overlap = a.overlap;
  return eben::welch_cross(ref, est, cfg);
}

void run_analyze_coherence(const AnalyzeArgs& a) {
  const auto est = analyze_common(a);
  const auto coh = eben::coherence(est);
  if (!a.out_path.empty()) {
    auto out = open_out(a.out_path);
    out << "frequency_hz,coherence\n";
    for (std::size_t i = 0; i < coh.size(); ++i)
      out << est.frequency_hz[i] << "," << coh[i] << "\n";
  }
  if (a.as_json)
    emit({{"frequency_hz", est.frequency_hz},
          {"coherence", coh},
          {"segments", est.num_segments}},
         true);
  else if (a.out_path.empty())
    for (std::size_t i = 0; i < coh.size(); ++i)
      std::cout << est.frequency_hz[i] << "," << coh[i] << "\n";
}

void run_analyze_transfer(const AnalyzeArgs& a) {
  const auto est = analyze_common(a);
  const auto tf = eben::transfer_function(est);
  if (!a.out_path.empty()) {
    auto out = open_out(a.out_path);
    out << "frequency_hz,magnitude_db,phase_rad,valid\n";
    for (std::size_t i = 0; i < tf.frequency_hz.size(); ++i)
      out << tf.frequency_hz[i] << "," << tf.magnitude_db[i] << ","
          << tf.phase_rad[i] << "," << (tf.valid[i] ? 1 : 0) << "\n";
  }
  if (a.as_json) {
    json j;
    j["frequency_hz"] = tf.frequency_hz;
    j["magnitude_db"] = tf.magnitude_db;
    j["phase_rad"] = tf.phase_rad;
    std::vector<int> valid(tf.valid.begin(), tf.valid.end());
    j["valid"] = valid;
    j["segments"] = est.num_segments;
    emit(j, true);
  } else if (a.out_path.empty()) {
    for (std::size_t i = 0; i < tf.frequency_hz.size(); ++i)
      std::cout << tf.frequency_hz[i] << "," << tf.magnitude_db[i] << ","
                << tf.phase_rad[i] << "," << (tf.valid[i] ? 1 : 0) << "\n";
  }
}

struct SpectrogramArgs {
  std::string in_path, out_path;
  std::size_t frame = 512;
  std::size_t hop = 128;
  bool as_json = false;
};

void run_analyze_spectrogram(const SpectrogramArgs& a) {
  const eben::Signal in = eben::read_wav(a.in_path);
  const eben::Spectrogram spec = eben::spectrogram(in, a.frame, a.hop);
  auto out = open_out(a.out_path);
  // row per frame, column per bin, dB relative to the global peak
  const std::size_t frames = spec.db.shape[0], bins = spec.db.shape[1];
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t k = 0; k < bins; ++k)
      out << spec.db.at(f, k) << (k + 1 < bins ? "," : "\n");
  }
  emit({{"rows", frames},
        {"cols", bins},
        {"floor_db", spec.floor_db},
        {"hop_s", spec.hop_s},
        {"bin_hz", spec.bin_hz},
        {"file", a.out_path}},
       a.as_json);
}

// -------------------------------------------------------------------- metric

struct MetricArgs {
  std::string ref_path, est_path;
  bool as_json = false;
};

void run_metric_single(const MetricArgs& a, const std::string& name) {
  const eben::Signal ref = eben::read_wav(a.ref_path);
  const eben::Signal est = eben::read_wav(a.est_path);
  double value = 0.0;
  if (name == "si_sdr") {
    if (ref.sample_rate_hz != est.sample_rate_hz)
      throw eben::ArgumentError("sample rates differ");
    value = eben::si_sdr(ref.samples, est.samples);
  } else {
    value = eben::stoi(ref, est);
  }
  emit({{name, value}}, a.as_json);
}

struct BatchArgs {
  std::string manifest_path, out_csv, out_json;
  std::vector<std::string> metrics = {"si_sdr", "stoi"};
  bool as_json = false;
};

std::vector<std::pair<std::string, std::string>> read_manifest(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw eben::IoError("cannot open manifest '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw eben::FormatError("manifest is empty: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "reference,estimate")
    throw eben::FormatError(
        "manifest header must be exactly 'reference,estimate'");
  std::vector<std::pair<std::string, std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw eben::FormatError("manifest row missing comma: " + line);
    rows.emplace_back(line.substr(0, comma), line.substr(comma + 1));
  }
  return rows;
}

void run_metric_batch(const BatchArgs& a) {
  for (const auto& m : a.metrics)
    if (m != "si_sdr" && m != "stoi")
      throw eben::ArgumentError("unknown metric '" + m +
                                "' (expected si_sdr or stoi)");
  const auto rows = read_manifest(a.manifest_path);
  auto csv = open_out(a.out_csv);
  csv << "ref,est,metric,value,valid\n";
  std::map<std::string, std::vector<double>> collected;
  for (const auto& [ref_path, est_path] : rows) {
    std::optional<eben::Signal> ref, est;
    std::string row_error;
    try {
      ref = eben::read_wav(ref_path);
      est = eben::read_wav(est_path);
      if (ref->samples.size() != est->samples.size()) {
        const std::size_t n = std::min(ref->samples.size(), est->samples.size());
        std::cerr << "warning: trimming '" << ref_path << "' / '" << est_path
                  << "' to " << n << " samples\n";
        ref->samples.resize(n);
        est->samples.resize(n);
      }
    } catch (const eben::Error& e) {
      row_error = e.what();
      std::cerr << "warning: skipping pair (" << ref_path << ", " << est_path
                << "): " << row_error << "\n";
    }
    for (const auto& metric : a.metrics) {
      double value = std::nan("");
      bool valid = false;
      if (row_error.empty()) {
        try {
          if (metric == "si_sdr") {
            if (ref->sample_rate_hz != est->sample_rate_hz)
              throw eben::ArgumentError("sample rates differ");
            value = eben::si_sdr(ref->samples, est->samples);
          } else {
            value = eben::stoi(*ref, *est);
          }
          valid = true;
        } catch (const eben::Error&) {
          value = std::nan("");
        }
      }
      csv << ref_path << "," << est_path << "," << metric << ","
          << (valid ? std::to_string(value) : "nan") << "," << (valid ? 1 : 0)
          << "\n";
      if (valid) collected[metric].push_back(value);
    }
  }
  json summary;
  for (const auto& metric : a.metrics) {
    const auto it = collected.find(metric);
    if (it == collected.end() || it->second.empty()) {
      summary[metric] = {{"median", nullptr}, {"iqr", nullptr}, {"n", 0}};
      continue;
    }
    const eben::SummaryStats s = eben::summarize(it->second);
    summary[metric] = {{"median", s.median}, {"iqr", s.iqr}, {"n", s.n}};
  }
  auto js = open_out(a.out_json);
  js << summary.dump(2) << "\n";
  if (a.as_json) {
    std::cout << summary.dump(2) << "\n";
  } else {
    for (const auto& metric : a.metrics) {
      const auto it = collected.find(metric);
      if (it == collected.end() || it->second.empty()) {
        std::cout << metric << ": no valid rows\n";
        continue;
      }
      const eben::SummaryStats s = eben::summarize(it->second);
      std::cout << metric << ": median " << s.median << " iqr " << s.iqr
                << " n " << s.n << "\n";
    }
  }
}

// --------------------------------------------------------------------- model

// The config file mirrors the library config structs: a top-level
// "generator" object and an optional "discriminator" object.
eben::GeneratorConfig parse_generator_config(const json& j) {
  static const std::vector<std::string> known = {
      "num_bands",       "bands_to_generator", "base_channels",
      "latent_channels", "encoder_strides",    "residual_dilations"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw eben::FormatError("config: unknown generator field '" + key + "'");
  }
  eben::GeneratorConfig cfg;
  try {
    if (j.contains("num_bands")) cfg.num_bands = j.at("num_bands").get<std::size_t>();
    if (j.contains("bands_to_generator"))
      cfg.bands_to_generator = j.at("bands_to_generator").get<std::size_t>();
    if (j.contains("base_channels"))
      cfg.base_channels = j.at("base_channels").get<std::size_t>();
    if (j.contains("latent_channels"))
      cfg.latent_channels = j.at("latent_channels").get<std::size_t>();
    if (j.contains("encoder_strides"))
      cfg.encoder_strides = j.at("encoder_strides").get<std::vector<std::size_t>>();
    if (j.contains("residual_dilations"))
      cfg.residual_dilations =
          j.at("residual_dilations").get<std::vector<std::size_t>>();
  } catch (const json::exception& e) {
    throw eben::FormatError(std::string("config: bad generator field: ") +
                            e.what());
  }
  return cfg;
}

eben::DiscriminatorConfig parse_discriminator_config(
    const json& j, const eben::GeneratorConfig& gen) {
  static const std::vector<std::string> known = {
      "num_scales",   "base_channels", "channel_growth",
      "max_channels", "full_rate_stages", "band_stages",
      "stage_kernel", "stage_stride",  "stage_groups",
      "leaky_slope"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw eben::FormatError("config: unknown discriminator field '" + key +
                              "'");
  }
  eben::DiscriminatorConfig cfg = eben::discriminator_config_for(gen);
  try {
    if (j.contains("num_scales"))
      cfg.num_scales = j.at("num_scales").get<std::size_t>();
    if (j.contains("base_channels"))
      cfg.base_channels = j.at("base_channels").get<std::size_t>();
    if (j.contains("channel_growth"))
      cfg.channel_growth = j.at("channel_growth").get<std::size_t>();
    if (j.contains("max_channels"))
      cfg.max_channels = j.at("max_channels").get<std::size_t>();
    if (j.contains("full_rate_stages"))
      cfg.full_rate_stages = j.at("full_rate_stages").get<std::size_t>();
    if (j.contains("band_stages"))
      cfg.band_stages = j.at("band_stages").get<std::size_t>();
    if (j.contains("stage_kernel"))
      cfg.stage_kernel = j.at("stage_kernel").get<std::size_t>();
    if (j.contains("stage_stride"))
      cfg.stage_stride = j.at("stage_stride").get<std::size_t>();
    if (j.contains("stage_groups"))
      cfg.stage_groups = j.at("stage_groups").get<std::size_t>();
    if (j.contains("leaky_slope"))
      cfg.leaky_slope = j.at("leaky_slope").get<double>();
  } catch (const json::exception& e) {
    throw eben::FormatError(std::string("config: bad discriminator field: ") +
                            e.what());
  }
  return cfg;
}

struct ModelConfigs {
  eben::GeneratorConfig gen;
  eben::DiscriminatorConfig disc;
};

ModelConfigs load_model_configs(const std::string& config_path) {
  ModelConfigs out;
  if (config_path.empty()) {
    out.disc = eben::discriminator_config_for(out.gen);
    return out;
  }
  std::ifstream in(config_path);
  if (!in) throw eben::IoError("cannot open config '" + config_path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw eben::FormatError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw eben::FormatError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "generator" && key != "discriminator")
      throw eben::FormatError("config: unknown top-level field '" + key + "'");
  }
  out.gen = parse_generator_config(j.value("generator", json::object()));
  out.disc = parse_discriminator_config(j.value("discriminator", json::object()),
                                        out.gen);
  return out;
}

eben::PqmfBank model_bank(const std::string& bank_path,
                          const eben::GeneratorConfig& gen) {
  if (!bank_path.empty()) return eben::load_bank(bank_path);
  log_note("designing " + std::to_string(gen.num_bands) + "-band bank inline");
  return eben::design_bank(gen.num_bands);
}

struct ModelInitArgs {
  std::string config_path, out_path;
  std::string kind = "model";
  std::uint64_t seed = 0;
  bool as_json = false;
};

void run_model_init(const ModelInitArgs& a) {
  const ModelConfigs cfgs = load_model_configs(a.config_path);
  eben::WeightStore store;
  if (a.kind == "model") {
    store = eben::init_model_weights(cfgs.gen, cfgs.disc, a.seed);
  } else if (a.kind == "generator") {
    store = eben::init_generator_weights(cfgs.gen, a.seed);
  } else if (a.kind == "discriminator") {
    store = eben::init_discriminator_weights(cfgs.disc, a.seed);
  } else {
    throw eben::ArgumentError(
        "--kind must be 'model', 'generator', or 'discriminator'");
  }
  eben::save_weights(store, a.out_path);
  emit({{"kind", a.kind},
        {"tensors", store.entries().size()},
        {"parameters", store.total_parameters()},
        {"file", a.out_path}},
       a.as_json);
}

struct ModelInfoArgs {
  std::string config_path, weights_path, bank_path;
  double sample_rate_hz = 16000.0;
  double target_ms = 20.0;
  bool as_json = false;
};

void run_model_info(const ModelInfoArgs& a) {
  const ModelConfigs cfgs = load_model_configs(a.config_path);
  const std::size_t bank_taps = a.bank_path.empty()
                                    ? 8 * cfgs.gen.num_bands
                                    : eben::load_bank(a.bank_path).taps;
  const eben::LatencyReport lat =
      eben::report_latency(cfgs.gen, bank_taps, a.sample_rate_hz, a.target_ms);
  const eben::ParameterCounts counts = eben::count_parameters(cfgs.gen, cfgs.disc);
  json j;
  j["generator_parameters"] = counts.generator;
  j["discriminator_parameters"] = counts.discriminators;
  j["total_parameters"] = counts.total;
  std::vector<std::size_t> per_scale;
  for (std::size_t k = 0; k < cfgs.disc.num_scales; ++k)
    per_scale.push_back(
        eben::count_parameters(eben::discriminator_layer_plans(cfgs.disc, k)));
  j["discriminator_scale_parameters"] = per_scale;
  j["latency"] = {{"lookahead_samples", lat.lookahead_samples},
                  {"history_samples", lat.history_samples},
                  {"receptive_field_samples", lat.receptive_field_samples},
                  {"lookahead_ms", lat.lookahead_ms},
                  {"target_ms", lat.target_ms},
                  {"meets_target", lat.meets_target}};
  if (!a.weights_path.empty()) {
    const eben::WeightStore store = eben::load_weights(a.weights_path);
    j["weights_file"] = {{"tensors", store.entries().size()},
                         {"parameters", store.total_parameters()}};
  }
  emit(j, a.as_json);
}

struct ModelEnhanceArgs {
  std::string in_path, out_path;
  std::string config_path, weights_path, bank_path;
  bool as_json = false;
};

void run_model_enhance(const ModelEnhanceArgs& a) {
  const ModelConfigs cfgs = load_model_configs(a.config_path);
  const eben::WeightStore store = eben::load_weights(a.weights_path);
  const eben::PqmfBank bank = model_bank(a.bank_path, cfgs.gen);
  const eben::Signal in = eben::read_wav(a.in_path);
  const eben::Signal out = eben::enhance(cfgs.gen, store, bank, in);
  eben::write_wav(out, a.out_path);
  emit({{"samples", out.samples.size()}, {"file", a.out_path}}, a.as_json);
}

struct ModelLossesArgs {
  std::string reference_path, degraded_path;
  std::string config_path, weights_path, bank_path;
  double lambda = 100.0;
  bool as_json = false;
};

void run_model_losses(const ModelLossesArgs& a) {
  const ModelConfigs cfgs = load_model_configs(a.config_path);
  const eben::WeightStore store = eben::load_weights(a.weights_path);
  const eben::PqmfBank bank = model_bank(a.bank_path, cfgs.gen);
  const eben::Signal reference = eben::read_wav(a.reference_path);
  const eben::Signal degraded = eben::read_wav(a.degraded_path);
  if (reference.samples.size() != degraded.samples.size())
    throw eben::ArgumentError("losses: reference and degraded lengths differ");
  const eben::Signal enhanced = eben::enhance(cfgs.gen, store, bank, degraded);
  const eben::LossBreakdown b = eben::gan_losses(
      cfgs.gen, cfgs.disc, store, bank, reference, enhanced, a.lambda);
  emit({{"l_d", b.l_d},
        {"l_g_adv", b.l_g_adv},
        {"l_g_rec", b.l_g_rec},
        {"lambda", b.lambda},
        {"l_g", b.l_g}},
       a.as_json);
}

// --------------------------------------------------------------------- synth

struct SynthArgs {
  std::string out_path;
  eben::SpeechConfig config;
  bool pcm16 = false;
  bool as_json = false;
};

void run_synth(const SynthArgs& a) {
  const eben::Signal s = eben::synthesize_speech(a.config);
  eben::write_wav(s, a.out_path,
                  a.pcm16 ? eben::WavEncoding::pcm16 : eben::WavEncoding::float32);
  emit({{"samples", s.samples.size()},
        {"sample_rate_hz", s.sample_rate_hz},
        {"file", a.out_path}},
       a.as_json);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bandwidth-extension toolkit: filter banks, degradation "
               "simulation, spectral analysis, metrics, and the band model"};
  app.require_subcommand(1);

  // pqmf ------------------------------------------------------------------
  auto* pqmf = app.add_subcommand("pqmf", "design and exercise filter banks");
  pqmf->require_subcommand(1);

  PqmfDesignArgs pd;
  auto* pqmf_design = pqmf->add_subcommand("design", "design a bank");
  pqmf_design->add_option("--bands", pd.bands, "number of bands (M >= 2)");
  pqmf_design->add_option("--taps", pd.taps, "prototype taps (default 8*M)");
  pqmf_design->add_option("--attenuation", pd.attenuation_db,
                          "stopband attenuation for the window design, dB");
  pqmf_design->add_option("--out", pd.out_path, "bank JSON path")->required();
  pqmf_design->add_flag("--json", pd.as_json, "JSON report on stdout");

  PqmfRoundtripArgs pr;
  auto* pqmf_rt = pqmf->add_subcommand("roundtrip", "analyze + synthesize a wav");
  pqmf_rt->add_option("--bank", pr.bank_path, "bank JSON (default: design inline)");
  pqmf_rt->add_option("--bands", pr.bands, "bands when designing inline");
  pqmf_rt->add_option("--taps", pr.taps, "taps when designing inline");
  pqmf_rt->add_option("--in", pr.in_path, "input wav")->required();
  pqmf_rt->add_option("--out", pr.out_path, "reconstructed wav");
  pqmf_rt->add_flag("--json", pr.as_json, "JSON report on stdout");

  PqmfResponseArgs presp;
  auto* pqmf_resp = pqmf->add_subcommand("response", "band magnitude response");
  pqmf_resp->add_option("--bank", presp.bank_path,
                        "bank JSON (default: design inline)");
  pqmf_resp->add_option("--bands", presp.bands, "bands when designing inline");
  pqmf_resp->add_option("--taps", presp.taps, "taps when designing inline");
  pqmf_resp->add_option("--band", presp.band, "band index")->required();
  pqmf_resp->add_option("--points", presp.points, "frequency samples");
  pqmf_resp->add_option("--out", presp.out_path, "CSV path");
  pqmf_resp->add_flag("--json", presp.as_json, "JSON on stdout");

  // degrade ----------------------------------------------------------------
  DegradeArgs dg;
  auto* degrade = app.add_subcommand("degrade", "simulate in-ear capture");
  degrade->add_option("in", dg.in_path, "clean wav")->required();
  degrade->add_option("out", dg.out_path, "degraded wav")->required();
  degrade->add_option("--filtered-out", dg.filtered_path,
                      "also write the noise-free lowpassed wav");
  degrade->add_option("--response-out", dg.response_path,
                      "write the composite filter response CSV");
  degrade->add_option("--cutoff", dg.config.cutoff_hz, "lowpass cutoff, Hz");
  degrade->add_option("--q", dg.config.q_factor, "lowpass resonance Q");
  degrade->add_option("--snr", dg.config.noise_snr_db,
                      "noise level below reference power, dB");
  degrade->add_option("--seed", dg.config.noise_seed, "noise seed");
  degrade->add_option("--noise-ref", dg.noise_ref,
                      "noise reference power: filtered (default) or clean");
  degrade->add_flag("--json", dg.as_json, "JSON report on stdout");

  // analyze ----------------------------------------------------------------
  auto* analyze = app.add_subcommand("analyze", "cross-spectral analysis");
  analyze->require_subcommand(1);

  AnalyzeArgs ac;
  auto* an_coh = analyze->add_subcommand("coherence", "magnitude-squared coherence");
  an_coh->add_option("--ref", ac.ref_path, "reference wav")->required();
  an_coh->add_option("--est", ac.est_path, "comparison wav")->required();
  an_coh->add_option("--segment", ac.segment, "Welch segment length");
  an_coh->add_option("--overlap", ac.overlap, "Welch overlap fraction");
  an_coh->add_option("--out", ac.out_path, "CSV path");
  an_coh->add_flag("--json", ac.as_json, "JSON on stdout");

  AnalyzeArgs at;
  auto* an_tf = analyze->add_subcommand("transfer", "H1 transfer function");
  an_tf->add_option("--ref", at.ref_path, "input-side wav")->required();
  an_tf->add_option("--est", at.est_path, "output-side wav")->required();
  an_tf->add_option("--segment", at.segment, "Welch segment length");
  an_tf->add_option("--overlap", at.overlap, "Welch overlap fraction");
  an_tf->add_option("--out", at.out_path, "CSV path");
  an_tf->add_flag("--json", at.as_json, "JSON on stdout");

  SpectrogramArgs sg;
  auto* an_sg = analyze->add_subcommand("spectrogram", "log-magnitude STFT");
  an_sg->add_option("--in", sg.in_path, "input wav")->required();
  an_sg->add_option("--frame", sg.frame, "frame length");
  an_sg->add_option("--hop", sg.hop, "hop length");
  an_sg->add_option("--out", sg.out_path, "CSV path")->required();
  an_sg->add_flag("--json", sg.as_json, "JSON sidecar on stdout");

  // metric -----------------------------------------------------------------
  auto* metric = app.add_subcommand("metric", "objective speech metrics");
  metric->require_subcommand(1);

  MetricArgs ms;
  auto* m_sisdr = metric->add_subcommand("si-sdr", "scale-invariant SDR, dB");
  m_sisdr->add_option("--ref", ms.ref_path, "reference wav")->required();
  m_sisdr->add_option("--est", ms.est_path, "estimate wav")->required();
  m_sisdr->add_flag("--json", ms.as_json, "JSON on stdout");

  MetricArgs mt;
  auto* m_stoi = metric->add_subcommand("stoi", "short-time intelligibility");
  m_stoi->add_option("--ref", mt.ref_path, "reference wav")->required();
  m_stoi->add_option("--est", mt.est_path, "estimate wav")->required();
  m_stoi->add_flag("--json", mt.as_json, "JSON on stdout");

  BatchArgs mb;
  auto* m_batch = metric->add_subcommand("batch", "evaluate a manifest of pairs");
  m_batch->add_option("--manifest", mb.manifest_path,
                      "CSV with header 'reference,estimate'")->required();
  m_batch->add_option("--out-csv", mb.out_csv, "per-row results CSV")->required();
  m_batch->add_option("--out-json", mb.out_json, "summary JSON")->required();
  m_batch->add_option("--metrics", mb.metrics,
                      "metrics to run (si_sdr, stoi)")->delimiter(',');
  m_batch->add_flag("--json", mb.as_json, "summary JSON on stdout");

  // model ------------------------------------------------------------------
  auto* model = app.add_subcommand("model", "band generator and discriminators");
  model->require_subcommand(1);

  ModelInitArgs mi;
  auto* mo_init = model->add_subcommand("init", "write freshly seeded weights");
  mo_init->add_option("--config", mi.config_path, "model config JSON");
  mo_init->add_option("--kind", mi.kind, "model, generator, or discriminator");
  mo_init->add_option("--seed", mi.seed, "init seed");
  mo_init->add_option("--out", mi.out_path, "weights path")->required();
  mo_init->add_flag("--json", mi.as_json, "JSON report on stdout");

  ModelInfoArgs mf;
  auto* mo_info = model->add_subcommand("info", "parameter counts and latency");
  mo_info->add_option("--config", mf.config_path, "model config JSON");
  mo_info->add_option("--bank", mf.bank_path, "bank JSON (default taps 8*M)");
  mo_info->add_option("--sample-rate", mf.sample_rate_hz, "Hz");
  mo_info->add_option("--target-ms", mf.target_ms, "lookahead budget, ms");
  mo_info->add_option("--weights", mf.weights_path, "optional weights file");
  mo_info->add_flag("--json", mf.as_json, "JSON on stdout");

  ModelEnhanceArgs me;
  auto* mo_enh = model->add_subcommand("enhance", "run the generator on a wav");
  mo_enh->add_option("in", me.in_path, "input wav")->required();
  mo_enh->add_option("out", me.out_path, "output wav")->required();
  mo_enh->add_option("--config", me.config_path, "model config JSON");
  mo_enh->add_option("--weights", me.weights_path, "weights file")->required();
  mo_enh->add_option("--bank", me.bank_path, "bank JSON (default: design inline)");
  mo_enh->add_flag("--json", me.as_json, "JSON report on stdout");

  ModelLossesArgs ml;
  auto* mo_loss = model->add_subcommand("losses", "GAN losses for a signal pair");
  mo_loss->add_option("reference", ml.reference_path, "clean wav")->required();
  mo_loss->add_option("degraded", ml.degraded_path, "degraded wav")->required();
  mo_loss->add_option("--config", ml.config_path, "model config JSON");
  mo_loss->add_option("--weights", ml.weights_path, "weights file")->required();
  mo_loss->add_option("--bank", ml.bank_path, "bank JSON (default: design inline)");
  mo_loss->add_option("--lambda", ml.lambda, "feature-matching weight");
  mo_loss->add_flag("--json", ml.as_json, "JSON on stdout");

  // synth ------------------------------------------------------------------
  SynthArgs sy;
  auto* synth = app.add_subcommand("synth", "deterministic speech-like fixture");
  synth->add_option("--out", sy.out_path, "output wav")->required();
  synth->add_option("--duration", sy.config.duration_s, "seconds");
  synth->add_option("--seed", sy.config.seed, "synthesis seed");
  synth->add_option("--sample-rate", sy.config.sample_rate_hz, "Hz");
  synth->add_option("--voiced-level", sy.config.voiced_level, "voiced rms");
  synth->add_option("--fricative-level", sy.config.fricative_level,
                    "fricative rms");
  synth->add_option("--rumble-level", sy.config.rumble_level, "low bed rms");
  synth->add_option("--breath-level", sy.config.breath_level, "pause rms");
  synth->add_flag("--pcm16", sy.pcm16, "write 16-bit PCM instead of float32");
  synth->add_flag("--json", sy.as_json, "JSON report on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (pqmf_design->parsed()) run_pqmf_design(pd);
    if (pqmf_rt->parsed()) run_pqmf_roundtrip(pr);
    if (pqmf_resp->parsed()) run_pqmf_response(presp);
    if (degrade->parsed()) run_degrade(dg);
    if (an_coh->parsed()) run_analyze_coherence(ac);
    if (an_tf->parsed()) run_analyze_transfer(at);
    if (an_sg->parsed()) run_analyze_spectrogram(sg);
    if (m_sisdr->parsed()) run_metric_single(ms, "si_sdr");
    if (m_stoi->parsed()) run_metric_single(mt, "stoi");
    if (m_batch->parsed()) run_metric_batch(mb);
    if (mo_init->parsed()) run_model_init(mi);
    if (mo_info->parsed()) run_model_info(mf);
    if (mo_enh->parsed()) run_model_enhance(me);
    if (mo_loss->parsed()) run_model_losses(ml);
    if (synth->parsed()) run_synth(sy);
  } catch (const eben::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
