#pragma once

#include "ghostspec/rng.hpp"

namespace ghostspec {

/// Photon-pair source: a CW pump on a nonlinear crystal emitting
/// signal/idler pairs around the degenerate wavelength (twice the pump).
/// The signal marginal is a truncated Gaussian; any smooth unimodal profile
/// would do for the downstream analyses, and the Gaussian has closed-form
/// checks. Swap sample_pair if a measured joint spectrum is ever needed.
struct SourceConfig {
  double pump_wavelength_nm = 405.0;
  double center_signal_wavelength_nm = 810.0;
  /// FWHM of the signal wavelength marginal. 0 is the monochromatic limit.
  /// The default is a non-physical free parameter, chosen so the blank
  /// spectrum spans a few tens of nm.
  double spectral_fwhm_nm = 20.0;
  /// Transverse 1/e^2 intensity radius at the crystal; the photon position
  /// marginal is Gaussian with sigma = beam_waist / 2.
  double beam_waist_mm = 1.0;
  /// Residual signal-idler transverse mismatch at the crystal plane.
  /// 0 is the perfect-correlation limit.
  double correlation_width_mm = 0.05;
  /// Emitted pairs per second; converts acquisition time to event count.
  double pair_rate_hz = 2000.0;

  /// Throws ConfigError on an invalid field (message names the field).
  void validate() const;
};

/// One emitted pair, positions at the crystal plane.
struct PairEvent {
  double lambda_signal_nm;
  double lambda_idler_nm;
  double y_signal_mm;
  double y_idler_mm;
  double x_signal_mm;
  double x_idler_mm;
};

/// Idler wavelength from energy conservation: 1/li = 1/pump - 1/ls.
/// Throws std::domain_error unless 0 < pump < lambda_signal.
double energy_conserved_idler(double lambda_signal_nm, double pump_nm);

/// Draw one pair. The signal wavelength is Gaussian, resampled until it
/// exceeds the pump wavelength; the idler follows from energy conservation.
PairEvent sample_pair(const SourceConfig& config, RandomStream& rng);

/// sigma of a Gaussian with the given full width at half maximum.
double fwhm_to_sigma(double fwhm);

}  // namespace ghostspec
