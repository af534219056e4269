#pragma once

#include <filesystem>

#include "ghostspec/config.hpp"
#include "ghostspec/dataset_io.hpp"

namespace ghostspec {

/// Row window used when a split-scene map is cut into its two region
/// spectra: [lower.first, lower.second) below the boundary and
/// [upper.first, upper.second) above it, with the configured margin rows
/// dropped around the boundary on both sides.
struct RegionRows {
  std::pair<int, int> lower;
  std::pair<int, int> upper;
};

/// Rows for the given plan/detector; throws ConfigError if the boundary or
/// margin leaves either region empty.
RegionRows split_region_rows(const RunConfig& config,
                             const std::string& scene_name);

struct BuiltDataset {
  DatasetManifest manifest;
  std::filesystem::path manifest_path;
};

/// Run the full measurement protocol into out_dir: three full-beam
/// reference runs plus `repetitions` split runs per filter, each split map
/// yielding one blank-region and one filter-region spectrum. Writes
/// maps/, spectra/ and manifest.txt. With the default plan that is 13 maps
/// and 3 + 2*repetitions*2 = 23 labeled spectra.
///
/// out_dir must not already contain files; on failure everything created
/// here is removed again.
BuiltDataset build_dataset(const RunConfig& config,
                           const std::filesystem::path& out_dir,
                           int n_workers = 0);

}  // namespace ghostspec
