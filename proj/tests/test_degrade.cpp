// Degradation model: the cookbook lowpass against its closed-form response,
// zero-phase filtering against an independent reference implementation, and
// the calibrated noise floor.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "eben/biquad.hpp"
#include "eben/degrade.hpp"
#include "eben/errors.hpp"
#include "eben/rng.hpp"
#include "eben/signal.hpp"

namespace {

// Closed-form squared magnitude of the bilinear-transform lowpass: with the
// prewarped frequency ratio nu = tan(w/2)/tan(w0/2), the analog prototype
// gives |H|^2 = 1 / ((1 - nu^2)^2 + (nu/Q)^2).
double analytic_lowpass_mag(double f_hz, double fc_hz, double q, double fs_hz) {
  const double nu = std::tan(M_PI * f_hz / fs_hz) / std::tan(M_PI * fc_hz / fs_hz);
  const double one_minus = 1.0 - nu * nu;
  return std::sqrt(1.0 / (one_minus * one_minus + (nu / q) * (nu / q)));
}

double mean_power(const std::vector<double>& x) {
  double p = 0.0;
  for (double v : x) p += v * v;
  return p / static_cast<double>(x.size());
}

eben::Signal noise_signal(std::size_t n, std::uint64_t seed) {
  eben::Signal s;
  s.sample_rate_hz = 16000;
  s.samples.resize(n);
  eben::Rng rng(seed);
  for (auto& v : s.samples) v = rng.uniform(-1.0, 1.0);
  return s;
}

}  // namespace

TEST_CASE("lowpass biquad matches the analytic prototype response") {
  const double fs = 16000.0;
  for (double q : {0.5, 1.0, 2.0}) {
    for (double fc : {200.0, 600.0, 2000.0}) {
      const auto bq = eben::design_lowpass_biquad(fc, q, fs);
      for (double f : {50.0, 300.0, 600.0, 761.0, 1200.0, 3000.0, 7000.0}) {
        const double got = eben::biquad_magnitude(bq, 2.0 * M_PI * f / fs);
        const double want = analytic_lowpass_mag(f, fc, q, fs);
        REQUIRE(got == Catch::Approx(want).epsilon(1e-12));
      }
      // unity DC gain and |H(fc)| = Q by construction
      REQUIRE(eben::biquad_magnitude(bq, 0.0) == Catch::Approx(1.0).margin(1e-12));
      REQUIRE(eben::biquad_magnitude(bq, 2.0 * M_PI * fc / fs) ==
              Catch::Approx(q).margin(1e-12));
    }
  }
  REQUIRE_THROWS_AS(eben::design_lowpass_biquad(0.0, 1.0, 16000.0),
                    eben::ArgumentError);
  REQUIRE_THROWS_AS(eben::design_lowpass_biquad(9000.0, 1.0, 16000.0),
                    eben::ArgumentError);
  REQUIRE_THROWS_AS(eben::design_lowpass_biquad(600.0, 0.0, 16000.0),
                    eben::ArgumentError);
  REQUIRE_THROWS_AS(eben::design_lowpass_biquad(600.0, 1.0, 0.0),
                    eben::ArgumentError);
}

TEST_CASE("filtfilt reproduces the reference implementation exactly") {
  // reference values from an established forward-backward implementation
  // (odd extension, pad length 9, steady-state initial conditions) applied
  // to x[n] = sin(0.3 n) + 0.25 cos(1.1 n) through the 600 Hz / Q=1 lowpass
  const std::vector<double> expected = {
      0.38515466611539828,   0.47646920593784092,  0.54947620366145722,
      0.59656120688346947,   0.61131121462688254,  0.58921715032754507,
      0.52860242982871841,   0.43139565879204611,  0.3032375317325432,
      0.15280821582176654,   -0.0092187753456332185, -0.17108314235750754,
      -0.32058587973260783,  -0.44580205616585233, -0.53617366704960989,
      -0.5838431175852542,   -0.58468697652179169, -0.53861369515926061,
      -0.44920508373771462,  -0.32317215051972975, -0.16996444169732505,
      -0.0013926805620740005, 0.16915030959067576,  0.3280315967256921,
      0.46292234690902312,   0.56395559770015924,  0.62422503113134664,
      0.63987707572318298,   0.61022727418642053,  0.53799413301499543,
      0.42928818301942723,   0.2929496385734966,   0.13927324224908763,
      -0.021366961037011516, -0.1794757469181287,  -0.32691958397424797,
      -0.45729539044530532,  -0.56647596648470866, -0.65315746131330732,
      -0.71890799284371443};
  std::vector<double> x(40);
  for (std::size_t n = 0; n < x.size(); ++n)
    x[n] = std::sin(0.3 * n) + 0.25 * std::cos(1.1 * n);
  const auto bq = eben::design_lowpass_biquad(600.0, 1.0, 16000.0);
  const auto y = eben::filtfilt(bq, x);
  REQUIRE(y.size() == expected.size());
  for (std::size_t n = 0; n < y.size(); ++n)
    REQUIRE(y[n] == Catch::Approx(expected[n]).margin(1e-12));
}

TEST_CASE("filtfilt is zero phase with squared magnitude") {
  const double fs = 16000.0;
  const auto bq = eben::design_lowpass_biquad(600.0, 1.0, fs);
  // each frequency completes whole periods over the 12000-sample fit window,
  // so the sin/cos projections are leakage-free
  for (double f : {160.0, 400.0, 800.0}) {
    std::vector<double> x(16000);
    for (std::size_t n = 0; n < x.size(); ++n)
      x[n] = std::sin(2.0 * M_PI * f * n / fs);
    const auto y = eben::filtfilt(bq, x);
    // least-squares sin/cos fit on the interior
    double ss = 0.0, sc = 0.0;
    std::size_t count = 0;
    for (std::size_t n = 2000; n < 14000; ++n) {
      const double ph = 2.0 * M_PI * f * n / fs;
      ss += y[n] * std::sin(ph);
      sc += y[n] * std::cos(ph);
      ++count;
    }
    const double a = 2.0 * ss / count;  // in-phase amplitude
    const double b = 2.0 * sc / count;  // quadrature (phase error) amplitude
    const double mag = eben::biquad_magnitude(bq, 2.0 * M_PI * f / fs);
    REQUIRE(std::hypot(a, b) == Catch::Approx(mag * mag).margin(1e-6));
    REQUIRE(std::abs(std::atan2(b, a)) < 1e-8);
  }
}

TEST_CASE("filtfilt passes constants exactly and rejects short inputs") {
  const auto bq = eben::design_lowpass_biquad(600.0, 1.0, 16000.0);
  std::vector<double> c(100, 0.7);
  const auto y = eben::filtfilt(bq, c);
  for (double v : y) REQUIRE(v == Catch::Approx(0.7).margin(1e-12));

  std::vector<double> tiny(9, 1.0);
  REQUIRE_THROWS_AS(eben::filtfilt(bq, tiny), eben::DegenerateInputError);
}

TEST_CASE("composite response landmarks sit where the analysis predicts") {
  eben::DegradationConfig cfg;
  const auto db = eben::degradation_response_db(
      cfg, 16000.0, {0.0, 600.0, 1200.0, 3000.0});
  REQUIRE(db[0] == Catch::Approx(0.0).margin(1e-9));
  REQUIRE(db[1] == Catch::Approx(0.0).margin(1e-9));  // Q = 1 puts fc at 0 dB
  for (std::size_t i = 0; i < 4; ++i) {
    const double f = std::vector<double>{0.0, 600.0, 1200.0, 3000.0}[i];
    const double want =
        40.0 * std::log10(analytic_lowpass_mag(f, 600.0, 1.0, 16000.0) + 1e-300);
    REQUIRE(db[i] == Catch::Approx(want).margin(1e-9));
  }
  REQUIRE(db[2] == Catch::Approx(-22.8066).margin(0.01));
  REQUIRE(db[3] == Catch::Approx(-59.8676).margin(0.01));
  REQUIRE_THROWS_AS(eben::degradation_response_db(cfg, 16000.0, {-5.0}),
                    eben::ArgumentError);
  REQUIRE_THROWS_AS(eben::degradation_response_db(cfg, 16000.0, {9000.0}),
                    eben::ArgumentError);
}

TEST_CASE("noise floor is calibrated against the filtered power") {
  const auto x = noise_signal(160000, 12345);  // 10 s at 16 kHz
  eben::DegradationConfig cfg;
  cfg.noise_seed = 9;
  const auto res = eben::degrade(x, cfg);

  REQUIRE(res.degraded.samples.size() == x.samples.size());
  REQUIRE(res.filtered.samples.size() == x.samples.size());
  REQUIRE(res.clean_power == Catch::Approx(mean_power(x.samples)).margin(1e-12));
  REQUIRE(res.filtered_power ==
          Catch::Approx(mean_power(res.filtered.samples)).margin(1e-12));
  REQUIRE(res.noise_sigma ==
          Catch::Approx(std::sqrt(res.filtered_power * std::pow(10.0, -2.3)))
              .margin(1e-12));

  // the realized noise power lands on the configured 23 dB
  std::vector<double> noise(x.samples.size());
  for (std::size_t i = 0; i < noise.size(); ++i)
    noise[i] = res.degraded.samples[i] - res.filtered.samples[i];
  const double measured_snr =
      10.0 * std::log10(res.filtered_power / mean_power(noise));
  REQUIRE(measured_snr == Catch::Approx(23.0).margin(0.1));
}

TEST_CASE("noise reference can be switched to the clean input") {
  const auto x = noise_signal(32000, 5);
  eben::DegradationConfig cfg;
  cfg.noise_relative_to_clean = true;
  const auto res = eben::degrade(x, cfg);
  REQUIRE(res.noise_sigma ==
          Catch::Approx(std::sqrt(res.clean_power * std::pow(10.0, -2.3)))
              .margin(1e-12));
  // clean power exceeds filtered power after a 600 Hz lowpass on white noise
  REQUIRE(res.clean_power > res.filtered_power * 2.0);
}

TEST_CASE("degradation is deterministic per seed") {
  const auto x = noise_signal(16000, 2);
  eben::DegradationConfig cfg;
  cfg.noise_seed = 77;
  const auto a = eben::degrade(x, cfg);
  const auto b = eben::degrade(x, cfg);
  REQUIRE(a.degraded.samples == b.degraded.samples);
  cfg.noise_seed = 78;
  const auto c = eben::degrade(x, cfg);
  REQUIRE(a.degraded.samples != c.degraded.samples);
  REQUIRE(a.filtered.samples == c.filtered.samples);
}

TEST_CASE("degrade validates its input") {
  eben::Signal bad;
  bad.sample_rate_hz = 0;
  bad.samples.assign(100, 0.0);
  REQUIRE_THROWS_AS(eben::degrade(bad, {}), eben::ArgumentError);

  eben::Signal tiny;
  tiny.sample_rate_hz = 16000;
  tiny.samples.assign(5, 1.0);
  REQUIRE_THROWS_AS(eben::degrade(tiny, {}), eben::DegenerateInputError);

  eben::Signal ok = noise_signal(100, 1);
  eben::DegradationConfig nan_cfg;
  nan_cfg.noise_snr_db = std::nan("");
  REQUIRE_THROWS_AS(eben::degrade(ok, nan_cfg), eben::ArgumentError);
}
