#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ghostspec/detection.hpp"
#include "ghostspec/scene.hpp"
#include "ghostspec/source.hpp"

namespace ghostspec {

/// One scene section: the object mask plus an optional spectral pre-filter
/// sitting at the bucket (attenuates the idler without imaging).
struct SceneConfig {
  SceneMask mask;
  std::optional<TransmissionProfile> prefilter;
};

/// The shipped measurement protocol: three full-beam reference runs plus
/// repeated split-scene runs, two region spectra per split map.
struct DatasetPlan {
  std::uint64_t seed = 0;
  double reference_duration_s = 3600.0;
  double split_duration_s = 3600.0;
  int repetitions = 5;
  std::string blank_scene = "blank";
  std::string filter_a_scene = "full_a";
  std::string filter_b_scene = "full_b";
  std::string split_a_scene = "split_a";
  std::string split_b_scene = "split_b";
  /// Object-plane y of the split between the two regions.
  double split_boundary_mm = 0.0;
  /// Rows skipped on both sides of the boundary when extracting region
  /// spectra (the position correlation blurs the edge).
  int region_margin_rows = 6;
};

struct AnalysisParams {
  std::uint64_t seed = 0;
  int k_max = 6;
  int restarts = 20;
  int nmf_rank = 3;
  int nmf_max_iter = 2000;
  double nmf_tol = 1e-10;
  int kmeans_max_iter = 200;
  double kmeans_tol = 1e-12;
  double lda_regularization = 1e-6;
  int lda_predim = 0;  // <= 0: n_samples - n_classes
};

/// Parsed run configuration file (flat `section.key = value` lines)
/// together with a digest of its canonical form.
struct RunConfig {
  SourceConfig source;
  DetectorConfig detector;
  std::map<std::string, SceneConfig> scenes;
  DatasetPlan dataset;
  AnalysisParams analysis;

  const SceneConfig& scene(const std::string& name) const;

  /// Digest of the canonical serialization; maps and manifests produced
  /// from one config share it.
  std::string digest() const;
};

/// Parse + validate. Errors carry file:line and the offending key.
/// Unknown keys are rejected. `dataset.seed` and `analysis.seed` must be
/// present; nothing is seeded implicitly.
RunConfig load_run_config(const std::filesystem::path& path);

/// Two-column (lambda_nm, transmission) text file with '#' comments, for
/// tabulated transmission profiles.
TransmissionProfile load_transmission_table(const std::filesystem::path& path);

}  // namespace ghostspec
