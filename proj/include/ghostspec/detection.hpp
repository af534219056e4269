#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ghostspec/scene.hpp"
#include "ghostspec/source.hpp"

namespace ghostspec {

/// Bucket (APD) + spectrometer/ICCD pair. Timing is abstracted away: the
/// delay line and coincidence electronics appear only as the lumped
/// signal_path_efficiency, and accidentals only as the dark rate.
struct DetectorConfig {
  /// APD + fiber coupling + objective, lumped.
  double bucket_efficiency = 0.5;
  /// Delay line + spectrometer + ICCD quantum efficiency, lumped.
  double signal_path_efficiency = 0.4;
  int n_spectral_pixels = 256;
  int n_spatial_pixels = 128;
  double lambda_min_nm = 770.0;
  double lambda_max_nm = 850.0;
  /// Spatial axis at the ICCD plane.
  double y_min_mm = -2.0;
  double y_max_mm = 2.0;
  /// Crystal plane -> ICCD plane scale for the signal arm.
  double iccd_magnification = 1.0;
  double dark_rate_per_pixel_hz = 2e-5;
  /// Optional spectral filter on the idler ahead of the scene mask (sits at
  /// the bucket, so it attenuates without acting as an imaging object).
  std::optional<TransmissionProfile> idler_prefilter;

  void validate() const;
};

/// Accumulated coincidence counts: spatial row x spectral column, plus the
/// axis calibration and provenance needed to interpret the file on its own.
/// Counts stay <= 2^31 - 1 so every backend and format handles them exactly.
struct LambdaYMap {
  int n_spatial = 0;
  int n_spectral = 0;
  std::vector<std::uint32_t> counts;  // row-major [spatial][spectral]
  std::vector<double> y_centers_mm;
  std::vector<double> lambda_centers_nm;
  double acquisition_time_s = 0.0;
  std::uint64_t seed = 0;
  std::string config_digest;

  std::uint32_t& at(int row, int col) {
    return counts[static_cast<std::size_t>(row) * n_spectral + col];
  }
  std::uint32_t at(int row, int col) const {
    return counts[static_cast<std::size_t>(row) * n_spectral + col];
  }
  std::uint64_t total_counts() const;

  bool same_calibration(const LambdaYMap& other) const;

  bool operator==(const LambdaYMap&) const = default;
};

struct PixelCoord {
  int spectral;
  int spatial;
};

/// Linear wavelength/position binning of the signal photon at the ICCD.
/// Outside the calibrated ranges -> nullopt.
std::optional<PixelCoord> bin_signal(const PairEvent& event,
                                     const DetectorConfig& config);

/// Digest of the generating configuration, stored in maps and manifests so
/// files can be cross-checked against each other.
std::string run_digest(const SourceConfig& source, const SceneMask& mask,
                       const DetectorConfig& det);

/// Full acquisition: draws Poisson(pair_rate * duration) pairs, gates each
/// through prefilter/object/bucket/signal-path, bins survivors, then adds
/// per-pixel Poisson dark counts. The event budget is split into fixed-size
/// batches with one RNG stream each; the result depends only on (seed,
/// configs, duration), never on n_workers (0 = hardware concurrency).
LambdaYMap simulate_acquisition(const SourceConfig& source,
                                const SceneMask& mask,
                                const DetectorConfig& det, double duration_s,
                                std::uint64_t seed, int n_workers = 0);

/// Elementwise count sum; acquisition times add. Throws ConfigError on
/// dimension or calibration mismatch.
LambdaYMap merge_maps(const LambdaYMap& a, const LambdaYMap& b);

}  // namespace ghostspec
