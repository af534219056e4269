#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "ghostspec/errors.hpp"
#include "ghostspec/source.hpp"

using namespace ghostspec;

namespace {

/// Oracle for energy conservation in extended precision, evaluated the same
/// way the contract states it: 1/(1/pump - 1/lambda_s). On x86 long double
/// carries 64 mantissa bits, well beyond double rounding.
long double idler_oracle(long double lambda_signal, long double pump) {
  return 1.0L / (1.0L / pump - 1.0L / lambda_signal);
}

}  // namespace

TEST_CASE("degenerate point maps to itself") {
  CHECK(energy_conserved_idler(810.0, 405.0) ==
        doctest::Approx(810.0).epsilon(1e-15));
}

TEST_CASE("energy conservation matches the extended-precision oracle") {
  // frozen from the oracle: 1/(1/405 - 1/800) = 324000/395
  const double expected_800 = 820.25316455696202532;
  CHECK(static_cast<double>(idler_oracle(800.0L, 405.0L)) ==
        doctest::Approx(expected_800).epsilon(1e-16));
  CHECK(energy_conserved_idler(800.0, 405.0) ==
        doctest::Approx(expected_800).epsilon(1e-12));

  // frozen from the oracle: 1/(1/405 - 1/820) = 332100/415
  const double expected_820 = 800.24096385542168675;
  CHECK(static_cast<double>(idler_oracle(820.0L, 405.0L)) ==
        doctest::Approx(expected_820).epsilon(1e-16));
  CHECK(energy_conserved_idler(820.0, 405.0) ==
        doctest::Approx(expected_820).epsilon(1e-12));
}

TEST_CASE("idler conversion is an involution") {
  for (double lambda : {780.0, 800.0, 810.0, 820.0, 900.0}) {
    const double idler = energy_conserved_idler(lambda, 405.0);
    CHECK(energy_conserved_idler(idler, 405.0) ==
          doctest::Approx(lambda).epsilon(1e-12));
  }
}

TEST_CASE("signal at or below the pump is rejected") {
  CHECK_THROWS_AS(energy_conserved_idler(405.0, 405.0), std::domain_error);
  CHECK_THROWS_AS(energy_conserved_idler(300.0, 405.0), std::domain_error);
  CHECK_THROWS_AS(energy_conserved_idler(800.0, 0.0), std::domain_error);
}

TEST_CASE("perfect correlation limit pins idler to signal position") {
  SourceConfig config;
  config.correlation_width_mm = 0.0;
  RandomStream rng(31);
  for (int i = 0; i < 1000; ++i) {
    const PairEvent ev = sample_pair(config, rng);
    CHECK(ev.y_idler_mm == ev.y_signal_mm);
    CHECK(ev.x_idler_mm == ev.x_signal_mm);
  }
}

TEST_CASE("monochromatic limit emits only the degenerate pair") {
  SourceConfig config;
  config.spectral_fwhm_nm = 0.0;
  RandomStream rng(32);
  for (int i = 0; i < 1000; ++i) {
    const PairEvent ev = sample_pair(config, rng);
    CHECK(ev.lambda_signal_nm == 810.0);
    CHECK(ev.lambda_idler_nm == 810.0);
  }
}

TEST_CASE("sampled marginal has the configured center and width") {
  SourceConfig config;
  RandomStream rng(33);
  const int n = 1000000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const PairEvent ev = sample_pair(config, rng);
    sum += ev.lambda_signal_nm;
    sq += ev.lambda_signal_nm * ev.lambda_signal_nm;
  }
  const double mean = sum / n;
  const double sigma = std::sqrt(sq / n - mean * mean);
  const double se_mean = fwhm_to_sigma(config.spectral_fwhm_nm) / std::sqrt(n);
  CHECK(std::abs(mean - 810.0) < 5.0 * se_mean);
  const double sample_fwhm = 2.0 * std::sqrt(2.0 * std::log(2.0)) * sigma;
  CHECK(std::abs(sample_fwhm - config.spectral_fwhm_nm) <
        0.02 * config.spectral_fwhm_nm);
}

TEST_CASE("every sampled pair conserves energy to 1e-9 relative") {
  SourceConfig config;
  RandomStream rng(34);
  const double inv_pump = 1.0 / config.pump_wavelength_nm;
  for (int i = 0; i < 100000; ++i) {
    const PairEvent ev = sample_pair(config, rng);
    const double lhs = 1.0 / ev.lambda_signal_nm + 1.0 / ev.lambda_idler_nm;
    CHECK(std::abs(lhs - inv_pump) <= 1e-9 * inv_pump);
  }
}

TEST_CASE("position mismatch spread matches the correlation width") {
  SourceConfig config;
  RandomStream rng(35);
  const int n = 100000;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const PairEvent ev = sample_pair(config, rng);
    const double d = ev.y_signal_mm - ev.y_idler_mm;
    sq += d * d;
  }
  const double sigma = std::sqrt(sq / n);
  const double se = config.correlation_width_mm / std::sqrt(2.0 * n);
  CHECK(std::abs(sigma - config.correlation_width_mm) < 3.0 * se);
}

TEST_CASE("identical seeds give byte-identical event streams") {
  SourceConfig config;
  RandomStream a(36), b(36);
  for (int i = 0; i < 1000; ++i) {
    const PairEvent ea = sample_pair(config, a);
    const PairEvent eb = sample_pair(config, b);
    CHECK(std::memcmp(&ea, &eb, sizeof(PairEvent)) == 0);
  }
}

TEST_CASE("config validation names the offending field") {
  SourceConfig config;
  config.beam_waist_mm = -1.0;
  try {
    config.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("beam_waist_mm") != std::string::npos);
  }
  SourceConfig bad_rate;
  bad_rate.pair_rate_hz = 0.0;
  CHECK_THROWS_AS(bad_rate.validate(), ConfigError);
  SourceConfig bad_center;
  bad_center.center_signal_wavelength_nm = 300.0;  // below the pump
  CHECK_THROWS_AS(bad_center.validate(), ConfigError);
}
