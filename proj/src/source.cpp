#include "ghostspec/source.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ghostspec/errors.hpp"

namespace ghostspec {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError("source." + field + ": " + what);
}

}  // namespace

void SourceConfig::validate() const {
  require(pump_wavelength_nm > 0, "pump_wavelength_nm", "must be > 0");
  require(center_signal_wavelength_nm > pump_wavelength_nm,
          "center_signal_wavelength_nm", "must exceed the pump wavelength");
  require(spectral_fwhm_nm >= 0, "spectral_fwhm_nm", "must be >= 0");
  require(spectral_fwhm_nm < center_signal_wavelength_nm, "spectral_fwhm_nm",
          "must be below the center wavelength");
  require(beam_waist_mm > 0, "beam_waist_mm", "must be > 0");
  require(correlation_width_mm >= 0, "correlation_width_mm", "must be >= 0");
  require(pair_rate_hz > 0, "pair_rate_hz", "must be > 0");
}

double fwhm_to_sigma(double fwhm) {
  // FWHM = 2 sqrt(2 ln 2) sigma
  return fwhm / 2.3548200450309493;
}

double energy_conserved_idler(double lambda_signal_nm, double pump_nm) {
  if (!(pump_nm > 0.0) || !(lambda_signal_nm > pump_nm))
    throw std::domain_error(
        "energy_conserved_idler: need 0 < pump < lambda_signal");
  return 1.0 / (1.0 / pump_nm - 1.0 / lambda_signal_nm);
}

PairEvent sample_pair(const SourceConfig& config, RandomStream& rng) {
  const double sigma_lambda = fwhm_to_sigma(config.spectral_fwhm_nm);
  double lambda_signal;
  do {
    lambda_signal =
        rng.normal(config.center_signal_wavelength_nm, sigma_lambda);
  } while (lambda_signal <= config.pump_wavelength_nm);

  const double sigma_y = config.beam_waist_mm / 2.0;
  PairEvent ev;
  ev.lambda_signal_nm = lambda_signal;
  ev.lambda_idler_nm =
      energy_conserved_idler(lambda_signal, config.pump_wavelength_nm);
  ev.y_signal_mm = rng.normal(0.0, sigma_y);
  ev.y_idler_mm = ev.y_signal_mm + rng.normal(0.0, config.correlation_width_mm);
  ev.x_signal_mm = rng.normal(0.0, sigma_y);
  ev.x_idler_mm = ev.x_signal_mm + rng.normal(0.0, config.correlation_width_mm);
  return ev;
}

}  // namespace ghostspec
