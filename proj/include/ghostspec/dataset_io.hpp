#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ghostspec/analysis.hpp"
#include "ghostspec/detection.hpp"

namespace ghostspec {

// Line-oriented text formats, documented byte-exactly in docs/FORMATS.md.
// Every writer goes through a temp file + atomic rename; every loader
// reports the offending line number. Doubles serialize with 17 significant
// digits so load(save(x)) == x holds bit-for-bit.

void save_map(const LambdaYMap& map, const std::filesystem::path& path);
LambdaYMap load_map(const std::filesystem::path& path);

void save_spectrum(const SpectrumVector& spectrum,
                   const std::filesystem::path& path);
SpectrumVector load_spectrum(const std::filesystem::path& path);

/// Analysis output container: ordered scalars, one-line notes, and named
/// numeric tables. Human-readable and machine-parsable at once.
struct AnalysisReport {
  struct Table {
    std::string name;
    int rows = 0;
    int cols = 0;
    std::vector<double> data;  // row-major
    bool operator==(const Table&) const = default;
  };
  std::string method;
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<std::pair<std::string, std::string>> notes;
  std::vector<Table> tables;

  bool operator==(const AnalysisReport&) const = default;
};

void save_report(const AnalysisReport& report,
                 const std::filesystem::path& path);
AnalysisReport load_report(const std::filesystem::path& path);

/// Index of one simulated acquisition run.
struct ManifestMapEntry {
  std::string scene;
  std::string label;  // class tag of the run's object
  double duration_s = 0.0;
  std::uint64_t seed = 0;
  std::string path;  // relative to the manifest's directory

  bool operator==(const ManifestMapEntry&) const = default;
};

/// Index of one spectrum extracted from a run's map.
struct ManifestSpectrumEntry {
  std::string label;
  int map_index = -1;
  int y_row_lo = 0;
  int y_row_hi = 0;
  std::string path;

  bool operator==(const ManifestSpectrumEntry&) const = default;
};

struct DatasetManifest {
  std::string config_digest;
  std::vector<ManifestMapEntry> maps;
  std::vector<ManifestSpectrumEntry> spectra;

  bool operator==(const DatasetManifest&) const = default;
};

void save_manifest(const DatasetManifest& manifest,
                   const std::filesystem::path& path);
DatasetManifest load_manifest(const std::filesystem::path& path);

/// Load every spectrum a manifest lists, resolving paths against the
/// manifest's directory and cross-checking map digests against the
/// manifest's config digest.
std::vector<SpectrumVector> load_manifest_spectra(
    const std::filesystem::path& manifest_path);

}  // namespace ghostspec
