#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ghostspec/rng.hpp"
#include "ghostspec/source.hpp"

namespace ghostspec {

/// Spectral transmission of one scene element, T(lambda) in [0, 1].
class TransmissionProfile {
 public:
  enum class Kind { blank, neutral, bandpass, tabulated };

  static TransmissionProfile blank();
  static TransmissionProfile neutral(double t0);
  static TransmissionProfile bandpass(double center_nm, double fwhm_nm,
                                      double peak);
  /// Knots strictly increasing in lambda; linear interpolation between,
  /// clamped to the end values outside.
  static TransmissionProfile tabulated(
      std::vector<std::pair<double, double>> knots);

  Kind kind() const { return kind_; }
  double operator()(double lambda_nm) const;

  double neutral_t0() const { return t0_; }
  double bandpass_center_nm() const { return center_nm_; }
  double bandpass_fwhm_nm() const { return fwhm_nm_; }
  double bandpass_peak() const { return peak_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

  /// Canonical one-line form, also used in config files and digests.
  std::string describe() const;

  void validate() const;

 private:
  Kind kind_ = Kind::blank;
  double t0_ = 1.0;
  double center_nm_ = 0.0, fwhm_nm_ = 0.0, peak_ = 0.0;
  std::vector<std::pair<double, double>> knots_;
};

/// One object-plane strip [y_lo, y_hi) with its transmission.
struct SceneRegion {
  double y_lo_mm;
  double y_hi_mm;
  TransmissionProfile transmission;
};

/// The composite object reached by the idler, 1D along y. Regions live at
/// the object plane; the idler's crystal-plane position is mapped there by
/// the imaging magnification. Immutable after construction, safe to share
/// across workers.
struct SceneMask {
  std::vector<SceneRegion> regions;
  double magnification = 1.5;
  TransmissionProfile default_transmission = TransmissionProfile::blank();

  /// Throws ConfigError if regions overlap or magnification <= 0.
  void validate() const;
};

/// T at (idler crystal-plane y, idler wavelength): maps y to the object
/// plane, picks the containing region (or the default).
double transmission_at(const SceneMask& mask, double y_idler_crystal_mm,
                       double lambda_idler_nm);

/// Bernoulli survival of the idler through the object. Consumes exactly one
/// uniform draw and survives iff u < T, so a pointwise-larger transmission
/// can only turn losses into survivals under a shared draw.
bool apply_object(const PairEvent& event, const SceneMask& mask,
                  RandomStream& rng);

}  // namespace ghostspec
