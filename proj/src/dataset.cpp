#include "ghostspec/dataset.hpp"

#include <cmath>
#include <string>

#include "ghostspec/analysis.hpp"
#include "ghostspec/errors.hpp"

namespace ghostspec {

RegionRows split_region_rows(const RunConfig& config,
                             const std::string& scene_name) {
  const SceneConfig& scene = config.scene(scene_name);
  const DetectorConfig& det = config.detector;
  const DatasetPlan& plan = config.dataset;

  // object plane -> crystal plane -> ICCD plane -> fractional row
  const double y_crystal =
      plan.split_boundary_mm / scene.mask.magnification;
  const double y_iccd = y_crystal * det.iccd_magnification;
  const double frac = (y_iccd - det.y_min_mm) / (det.y_max_mm - det.y_min_mm);
  const int boundary_row =
      static_cast<int>(std::lround(frac * det.n_spatial_pixels));

  RegionRows rows;
  rows.lower = {0, boundary_row - plan.region_margin_rows};
  rows.upper = {boundary_row + plan.region_margin_rows, det.n_spatial_pixels};
  if (rows.lower.second <= rows.lower.first ||
      rows.upper.second <= rows.upper.first)
    throw ConfigError(
        "dataset: split boundary/margin leaves an empty region (boundary row " +
        std::to_string(boundary_row) + ", margin " +
        std::to_string(plan.region_margin_rows) + ", " +
        std::to_string(det.n_spatial_pixels) + " rows)");
  return rows;
}

namespace {

struct RunSpec {
  std::string name;   // file stem
  std::string scene;  // scene section
  std::string label;  // class of the run's object
  double duration_s;
  bool split;  // two region spectra instead of one full-beam spectrum
};

}  // namespace

BuiltDataset build_dataset(const RunConfig& config,
                           const std::filesystem::path& out_dir,
                           int n_workers) {
  namespace fs = std::filesystem;
  const DatasetPlan& plan = config.dataset;

  if (fs::exists(out_dir) && !fs::is_empty(out_dir))
    throw IoError("dataset output directory is not empty: " +
                  out_dir.string());

  std::vector<RunSpec> runs;
  runs.push_back({"ref_blank", plan.blank_scene, "blank",
                  plan.reference_duration_s, false});
  runs.push_back({"ref_filter_a", plan.filter_a_scene, "filter_a",
                  plan.reference_duration_s, false});
  runs.push_back({"ref_filter_b", plan.filter_b_scene, "filter_b",
                  plan.reference_duration_s, false});
  for (int rep = 0; rep < plan.repetitions; ++rep)
    runs.push_back({"split_a_rep" + std::to_string(rep), plan.split_a_scene,
                    "filter_a", plan.split_duration_s, true});
  for (int rep = 0; rep < plan.repetitions; ++rep)
    runs.push_back({"split_b_rep" + std::to_string(rep), plan.split_b_scene,
                    "filter_b", plan.split_duration_s, true});

  const std::string digest = config.digest();
  const bool created_root = fs::create_directories(out_dir);

  try {
    fs::create_directories(out_dir / "maps");
    fs::create_directories(out_dir / "spectra");

    DatasetManifest manifest;
    manifest.config_digest = digest;

    for (std::size_t i = 0; i < runs.size(); ++i) {
      const RunSpec& run = runs[i];
      const SceneConfig& scene = config.scene(run.scene);
      DetectorConfig det = config.detector;
      det.idler_prefilter = scene.prefilter;

      const std::uint64_t seed = plan.seed + i;  // per-run seeds, recorded below
      LambdaYMap map = simulate_acquisition(config.source, scene.mask, det,
                                            run.duration_s, seed, n_workers);
      map.config_digest = digest;

      const std::string map_rel = "maps/" + run.name + ".map";
      save_map(map, out_dir / map_rel);
      manifest.maps.push_back(
          {run.scene, run.label, run.duration_s, seed, map_rel});
      const int map_index = static_cast<int>(manifest.maps.size()) - 1;

      auto emit_spectrum = [&](const std::string& stem,
                               const std::string& label, int row_lo,
                               int row_hi) {
        SpectrumVector s = extract_spectrum(map, row_lo, row_hi);
        s.label = label;
        s.source_id = map_rel;
        const std::string rel = "spectra/" + stem + ".spec";
        save_spectrum(s, out_dir / rel);
        manifest.spectra.push_back({label, map_index, row_lo, row_hi, rel});
      };

      if (run.split) {
        const RegionRows rows = split_region_rows(config, run.scene);
        emit_spectrum(run.name + "_lower", "blank", rows.lower.first,
                      rows.lower.second);
        emit_spectrum(run.name + "_upper", run.label, rows.upper.first,
                      rows.upper.second);
      } else {
        emit_spectrum(run.name, run.label, 0, map.n_spatial);
      }
    }

    BuiltDataset built;
    built.manifest_path = out_dir / "manifest.txt";
    save_manifest(manifest, built.manifest_path);
    built.manifest = std::move(manifest);
    return built;
  } catch (...) {
    // leave no partial dataset behind; out_dir was empty or ours
    std::error_code ec;
    if (created_root) {
      fs::remove_all(out_dir, ec);
    } else {
      for (const char* sub : {"maps", "spectra"})
        fs::remove_all(out_dir / sub, ec);
      fs::remove(out_dir / "manifest.txt", ec);
    }
    throw;
  }
}

}  // namespace ghostspec
