#include <doctest.h>

#include <fstream>
#include <set>
#include <string>

#include "ghostspec/dataset.hpp"
#include "ghostspec/errors.hpp"
#include "support/tmpdir.hpp"

using namespace ghostspec;
using testsupport::TmpDir;

namespace {

// small fast protocol: low rate, short runs, coarse grid
const char* kFastConfig =
    "source.pair_rate_hz = 2000\n"
    "detector.n_spectral_pixels = 32\n"
    "detector.n_spatial_pixels = 16\n"
    "detector.dark_rate_per_pixel_hz = 0\n"
    "scene.blank.default = blank\n"
    "scene.full_a.default = bandpass 797 7 0.9\n"
    "scene.full_b.default = bandpass 823 7 0.9\n"
    "scene.split_a.default = blank\n"
    "scene.split_a.region = 0 50 bandpass 797 7 0.9\n"
    "scene.split_b.default = blank\n"
    "scene.split_b.region = 0 50 bandpass 823 7 0.9\n"
    "dataset.seed = 404\n"
    "dataset.reference_duration_s = 2\n"
    "dataset.split_duration_s = 2\n"
    "dataset.repetitions = 2\n"
    "dataset.region_margin_rows = 1\n"
    "analysis.seed = 1\n";

RunConfig fast_config(const TmpDir& dir, const std::string& extra = "",
                      const std::string& name = "fast.cfg") {
  const auto path = dir / name;
  std::ofstream(path, std::ios::trunc) << kFastConfig << extra;
  return load_run_config(path);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("split boundary and margin map to the documented row windows") {
  TmpDir dir("ds");
  RunConfig config = load_run_config(GHOSTSPEC_DEFAULT_CONFIG);
  const RegionRows rows = split_region_rows(config, "split_a");
  CHECK(rows.lower.first == 0);
  CHECK(rows.lower.second == 58);
  CHECK(rows.upper.first == 70);
  CHECK(rows.upper.second == 128);

  config.dataset.region_margin_rows = 64;
  CHECK_THROWS_AS(split_region_rows(config, "split_a"), ConfigError);
}

TEST_CASE("the full protocol writes maps, spectra and a coherent manifest") {
  TmpDir dir("ds");
  const RunConfig config = fast_config(dir);
  const BuiltDataset built = build_dataset(config, dir / "out");

  CHECK(built.manifest.maps.size() == 7);      // 3 refs + 2*2 splits
  CHECK(built.manifest.spectra.size() == 11);  // 3 + 2*2*2
  CHECK(built.manifest.config_digest == config.digest());

  int blank = 0, fa = 0, fb = 0;
  for (const auto& s : built.manifest.spectra) {
    if (s.label == "blank") ++blank;
    if (s.label == "filter_a") ++fa;
    if (s.label == "filter_b") ++fb;
  }
  CHECK(blank == 5);  // 1 reference + 4 split lower regions
  CHECK(fa == 3);     // 1 reference + 2 split upper regions
  CHECK(fb == 3);

  for (const auto& m : built.manifest.maps)
    CHECK(std::filesystem::exists(dir.path() / "out" / m.path));
  for (const auto& s : built.manifest.spectra)
    CHECK(std::filesystem::exists(dir.path() / "out" / s.path));

  // loads back and cross-checks digests
  const auto spectra = load_manifest_spectra(built.manifest_path);
  CHECK(spectra.size() == 11);

  // references come first, one per class
  CHECK(built.manifest.spectra[0].label == "blank");
  CHECK(built.manifest.spectra[1].label == "filter_a");
  CHECK(built.manifest.spectra[2].label == "filter_b");
}

TEST_CASE("zero repetitions leave exactly the three reference spectra") {
  TmpDir dir("ds");
  std::string body(kFastConfig);
  const auto pos = body.find("dataset.repetitions = 2");
  body.replace(pos, 23, "dataset.repetitions = 0");
  const auto path = dir / "zero.cfg";
  std::ofstream(path, std::ios::trunc) << body;
  const BuiltDataset built =
      build_dataset(load_run_config(path), dir / "out0");
  CHECK(built.manifest.maps.size() == 3);
  CHECK(built.manifest.spectra.size() == 3);
}

TEST_CASE("rebuilding from the same config is byte-identical") {
  TmpDir dir("ds");
  const RunConfig config = fast_config(dir);
  const BuiltDataset a = build_dataset(config, dir / "a");
  const BuiltDataset b = build_dataset(config, dir / "b");
  CHECK(slurp(a.manifest_path) == slurp(b.manifest_path));
  for (const auto& m : a.manifest.maps)
    CHECK(slurp(dir.path() / "a" / m.path) == slurp(dir.path() / "b" / m.path));
  for (const auto& s : a.manifest.spectra)
    CHECK(slurp(dir.path() / "a" / s.path) == slurp(dir.path() / "b" / s.path));
}

TEST_CASE("a non-empty output directory is refused") {
  TmpDir dir("ds");
  const RunConfig config = fast_config(dir);
  std::filesystem::create_directories(dir / "busy");
  std::ofstream(dir.path() / "busy" / "keep.txt") << "precious\n";
  CHECK_THROWS_AS(build_dataset(config, dir / "busy"), IoError);
  CHECK(std::filesystem::exists(dir.path() / "busy" / "keep.txt"));
}

TEST_CASE("failures clean up every partial output") {
  TmpDir dir("ds");
  RunConfig config = fast_config(dir);
  config.dataset.split_b_scene = "no_such_scene";
  CHECK_THROWS_AS(build_dataset(config, dir / "broken"), ConfigError);
  CHECK(!std::filesystem::exists(dir / "broken"));
}
