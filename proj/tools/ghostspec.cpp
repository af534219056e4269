// ghostspec command-line pipeline: simulate scenes, build the measurement
// protocol dataset, run the discrimination analyses, render heatmaps.

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "ghostspec/analysis.hpp"
#include "ghostspec/config.hpp"
#include "ghostspec/dataset.hpp"
#include "ghostspec/dataset_io.hpp"
#include "ghostspec/errors.hpp"
#include "ghostspec/render.hpp"

namespace {

using namespace ghostspec;
namespace fs = std::filesystem;

// Seed offsets for the imaging-test runs chained by reproduce-paper; far
// above any dataset run index so seeds never collide.
constexpr std::uint64_t kImagingBlankSeedOffset = 1u << 20;
constexpr std::uint64_t kImagingNdSeedOffset = (1u << 20) + 1;

struct LoadedDataset {
  std::vector<SpectrumVector> spectra;  // as stored (raw counts)
  std::vector<std::string> labels;
  Mat points;                        // unit-sum normalized spectra, one row each
  std::vector<int> reference_index;  // into spectra, one per distinct label
  std::vector<std::string> reference_labels;
  Mat references;  // normalized reference spectra
};

LoadedDataset load_dataset(const fs::path& manifest_path) {
  LoadedDataset ds;
  ds.spectra = load_manifest_spectra(manifest_path);
  if (ds.spectra.empty())
    throw AnalysisError("manifest lists no spectra: " + manifest_path.string());

  std::vector<SpectrumVector> normalized;
  normalized.reserve(ds.spectra.size());
  for (const auto& s : ds.spectra) {
    ds.labels.push_back(s.label);
    normalized.push_back(normalize(s));
  }
  ds.points = spectra_matrix(normalized);

  // the builder writes the full-beam reference of each class before any
  // region spectra, so the first spectrum per label is that reference
  std::map<std::string, int> seen;
  for (std::size_t i = 0; i < ds.spectra.size(); ++i) {
    if (seen.emplace(ds.spectra[i].label, static_cast<int>(i)).second) {
      ds.reference_index.push_back(static_cast<int>(i));
      ds.reference_labels.push_back(ds.spectra[i].label);
    }
  }
  std::vector<SpectrumVector> refs;
  for (int idx : ds.reference_index) refs.push_back(normalized[idx]);
  ds.references = spectra_matrix(refs);
  return ds;
}

AnalysisReport::Table mat_table(const std::string& name, const Mat& m) {
  AnalysisReport::Table t;
  t.name = name;
  t.rows = m.rows();
  t.cols = m.cols();
  t.data.assign(m.data(), m.data() + m.size());
  return t;
}

std::string spectrum_name(const SpectrumVector& s, std::size_t index) {
  if (!s.source_id.empty()) {
    std::string stem = fs::path(s.source_id).stem().string();
    return stem + "[" + std::to_string(s.y_row_lo) + ":" +
           std::to_string(s.y_row_hi) + ")";
  }
  return "spectrum_" + std::to_string(index);
}

/// Smallest k whose residual plateaus (next/current ratio above 0.8); the
/// curve is non-increasing, so this is the elbow of the ratio test.
int choose_elbow_k(const std::vector<std::pair<int, double>>& curve) {
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const double current = curve[i].second;
    const double next = curve[i + 1].second;
    const double ratio = current > 0.0 ? next / current : 1.0;
    if (ratio > 0.8) return curve[i].first;
  }
  return curve.back().first;
}

struct MethodOutcome {
  std::vector<std::string> per_spectrum;  // matched/predicted class labels
  std::string headline;
};

MethodOutcome analyze_kmeans(const LoadedDataset& ds,
                             const AnalysisParams& params,
                             const fs::path& out_dir) {
  const int n = ds.points.rows();
  const int k_max = std::min(params.k_max, n);
  const auto curve =
      kmeans_elbow(ds.points, k_max, params.seed, params.restarts);
  const int chosen_k = choose_elbow_k(curve);
  const KMeansResult best =
      kmeans_best(ds.points, chosen_k, params.seed, params.restarts,
                  params.kmeans_max_iter, params.kmeans_tol);

  AnalysisReport report;
  report.method = "kmeans";
  report.scalars.emplace_back("chosen_k", chosen_k);
  report.scalars.emplace_back("residual", best.residual);
  report.scalars.emplace_back("iterations", best.iterations);

  Mat elbow(static_cast<int>(curve.size()), 2);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    elbow(static_cast<int>(i), 0) = curve[i].first;
    elbow(static_cast<int>(i), 1) = curve[i].second;
  }
  report.tables.push_back(mat_table("elbow", elbow));
  report.tables.push_back(mat_table("centroids", best.centroids));
  Mat assign(n, 1);
  for (int i = 0; i < n; ++i) assign(i, 0) = best.assignments[i];
  report.tables.push_back(mat_table("assignments", assign));

  MethodOutcome outcome;
  std::vector<std::string> cluster_label(chosen_k);
  if (chosen_k == ds.references.rows()) {
    const ComponentMatch match =
        match_components(best.centroids, ds.references);
    Mat cosines(chosen_k, 1);
    for (int c = 0; c < chosen_k; ++c) {
      cluster_label[c] = ds.reference_labels[match.reference_of[c]];
      cosines(c, 0) = match.cosines[c];
      report.notes.emplace_back(
          "centroid_" + std::to_string(c),
          "matches reference '" + cluster_label[c] + "'");
    }
    report.tables.push_back(mat_table("centroid_match_cosine", cosines));
  } else {
    for (int c = 0; c < chosen_k; ++c)
      cluster_label[c] = "cluster_" + std::to_string(c);
    report.notes.emplace_back(
        "centroid_matching",
        "skipped: " + std::to_string(chosen_k) + " clusters vs " +
            std::to_string(ds.references.rows()) + " references");
  }
  for (int i = 0; i < n; ++i)
    outcome.per_spectrum.push_back(cluster_label[best.assignments[i]]);
  outcome.headline =
      "k-means: elbow at k=" + std::to_string(chosen_k) + ", residual " +
      std::to_string(best.residual);

  save_report(report, out_dir / "kmeans.report");
  return outcome;
}

MethodOutcome analyze_nmf(const LoadedDataset& ds, const AnalysisParams& params,
                          const fs::path& out_dir) {
  const int n = ds.points.rows();
  const int rank =
      std::min(params.nmf_rank, std::min(n, ds.points.cols()));
  const NmfResult res = nmf(ds.points, rank, params.seed, params.nmf_max_iter,
                            params.nmf_tol);

  AnalysisReport report;
  report.method = "nmf";
  report.scalars.emplace_back("rank", rank);
  report.scalars.emplace_back("residue_norm", res.residue_norm);
  report.scalars.emplace_back("iterations", res.iterations);
  report.tables.push_back(mat_table("components", res.h));
  report.tables.push_back(mat_table("weights", res.w));

  MethodOutcome outcome;
  std::vector<std::string> component_label(rank);
  if (rank == ds.references.rows()) {
    const ComponentMatch match = match_components(res.h, ds.references);
    Mat cosines(rank, 1);
    for (int c = 0; c < rank; ++c) {
      component_label[c] = ds.reference_labels[match.reference_of[c]];
      cosines(c, 0) = match.cosines[c];
      report.notes.emplace_back(
          "component_" + std::to_string(c),
          "matches reference '" + component_label[c] + "'");
    }
    report.tables.push_back(mat_table("component_match_cosine", cosines));
  } else {
    for (int c = 0; c < rank; ++c)
      component_label[c] = "component_" + std::to_string(c);
    report.notes.emplace_back(
        "component_matching",
        "skipped: rank " + std::to_string(rank) + " vs " +
            std::to_string(ds.references.rows()) + " references");
  }
  int agree = 0;
  for (int i = 0; i < n; ++i) {
    const std::string label = component_label[dominant_component(res.w, i)];
    outcome.per_spectrum.push_back(label);
    if (label == ds.labels[i]) ++agree;
  }
  report.scalars.emplace_back("dominant_agreement", agree);
  outcome.headline = "nmf: rank " + std::to_string(rank) +
                     ", dominant component matches the label for " +
                     std::to_string(agree) + "/" + std::to_string(n) +
                     " spectra";

  save_report(report, out_dir / "nmf.report");
  return outcome;
}

MethodOutcome analyze_lda(const LoadedDataset& ds, const AnalysisParams& params,
                          const fs::path& out_dir) {
  const int n = ds.points.rows();
  const LdaResult res = lda(ds.points, ds.labels, params.lda_regularization,
                            params.lda_predim);
  const std::vector<int> predicted = nearest_mean_classes(res);

  AnalysisReport report;
  report.method = "lda";
  const int n_classes = static_cast<int>(res.class_names.size());
  Mat eigvals(static_cast<int>(res.eigenvalues.size()), 1);
  for (std::size_t i = 0; i < res.eigenvalues.size(); ++i)
    eigvals(static_cast<int>(i), 0) = res.eigenvalues[i];
  report.tables.push_back(mat_table("eigenvalues", eigvals));
  report.tables.push_back(mat_table("projections", res.projected));
  report.tables.push_back(mat_table("class_means", res.class_means));
  report.tables.push_back(mat_table("directions", res.directions));

  Mat confusion(n_classes, n_classes);
  int correct = 0;
  for (int i = 0; i < n; ++i) {
    confusion(res.labels[i], predicted[i]) += 1.0;
    if (predicted[i] == res.labels[i]) ++correct;
  }
  report.tables.push_back(mat_table("confusion", confusion));
  for (int c = 0; c < n_classes; ++c)
    report.notes.emplace_back("class_" + std::to_string(c),
                              res.class_names[c]);
  report.scalars.emplace_back("correct", correct);
  report.scalars.emplace_back("n_samples", n);

  MethodOutcome outcome;
  for (int i = 0; i < n; ++i)
    outcome.per_spectrum.push_back(res.class_names[predicted[i]]);
  outcome.headline = "lda: nearest-class-mean correct for " +
                     std::to_string(correct) + "/" + std::to_string(n) +
                     " spectra";

  save_report(report, out_dir / "lda.report");
  return outcome;
}

void cmd_analyze(const fs::path& manifest, const std::string& method,
                 const fs::path& out_dir, const AnalysisParams& params) {
  const LoadedDataset ds = load_dataset(manifest);
  fs::create_directories(out_dir);

  std::map<std::string, MethodOutcome> outcomes;
  if (method == "kmeans" || method == "all")
    outcomes["kmeans"] = analyze_kmeans(ds, params, out_dir);
  if (method == "nmf" || method == "all")
    outcomes["nmf"] = analyze_nmf(ds, params, out_dir);
  if (method == "lda" || method == "all")
    outcomes["lda"] = analyze_lda(ds, params, out_dir);

  std::string summary;
  summary += "analysis of " + std::to_string(ds.spectra.size()) +
             " spectra from " + manifest.filename().string() + "\n";
  for (const auto& [name, outcome] : outcomes)
    summary += outcome.headline + "\n";
  summary += "\n";
  summary += "spectrum";
  for (const auto& [name, outcome] : outcomes) summary += "\t" + name;
  summary += "\tlabel\n";
  for (std::size_t i = 0; i < ds.spectra.size(); ++i) {
    summary += spectrum_name(ds.spectra[i], i);
    for (const auto& [name, outcome] : outcomes)
      summary += "\t" + outcome.per_spectrum[i];
    summary += "\t" + ds.labels[i] + "\n";
  }
  std::ofstream os(out_dir / "summary.txt", std::ios::trunc);
  if (!os)
    throw IoError("cannot open for writing: " +
                  (out_dir / "summary.txt").string());
  os << summary;
}

void cmd_simulate(const fs::path& config_path, const std::string& scene_name,
                  double duration_s, std::uint64_t seed, const fs::path& out) {
  const RunConfig config = load_run_config(config_path);
  const SceneConfig& scene = config.scene(scene_name);
  DetectorConfig det = config.detector;
  det.idler_prefilter = scene.prefilter;
  LambdaYMap map =
      simulate_acquisition(config.source, scene.mask, det, duration_s, seed);
  map.config_digest = config.digest();
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  save_map(map, out);
  std::cout << out.string() << ": " << map.total_counts() << " counts in "
            << duration_s << " s\n";
}

void cmd_reproduce(const fs::path& config_path, const fs::path& out_dir) {
  const RunConfig config = load_run_config(config_path);
  fs::create_directories(out_dir);

  // imaging test: blank reference and the half-beam neutral-density scene
  const struct {
    const char* scene;
    const char* stem;
    double duration_s;
    std::uint64_t seed;
  } imaging_runs[] = {
      {"fig_imaging_blank", "imaging_blank", 120.0,
       config.dataset.seed + kImagingBlankSeedOffset},
      {"fig_imaging_nd", "imaging_nd", 180.0,
       config.dataset.seed + kImagingNdSeedOffset},
  };
  fs::create_directories(out_dir / "imaging");
  for (const auto& run : imaging_runs) {
    const SceneConfig& scene = config.scene(run.scene);
    DetectorConfig det = config.detector;
    det.idler_prefilter = scene.prefilter;
    LambdaYMap map = simulate_acquisition(config.source, scene.mask, det,
                                          run.duration_s, run.seed);
    map.config_digest = config.digest();
    const fs::path map_path =
        out_dir / "imaging" / (std::string(run.stem) + ".map");
    save_map(map, map_path);
    render_map_ppm(map, out_dir / "imaging" / (std::string(run.stem) + ".ppm"));
  }

  const BuiltDataset built = build_dataset(config, out_dir / "dataset");
  cmd_analyze(built.manifest_path, "all", out_dir / "analysis",
              config.analysis);

  fs::create_directories(out_dir / "renders");
  for (const auto& entry : built.manifest.maps) {
    const LambdaYMap map = load_map(out_dir / "dataset" / entry.path);
    const std::string stem = fs::path(entry.path).stem().string();
    render_map_ppm(map, out_dir / "renders" / (stem + ".ppm"));
  }
  std::cout << "wrote " << out_dir.string()
            << " (imaging, dataset, analysis, renders)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ghost-imaging spectrometer: simulation and analysis pipeline"};
  app.require_subcommand(1);

  std::string config_path, scene, method = "all", manifest, map_file, out;
  double duration_s = 0.0;
  std::uint64_t seed = 0;
  int k_max_override = 0;

  auto* sim = app.add_subcommand("simulate", "simulate one acquisition run");
  sim->add_option("--config", config_path, "run configuration file")
      ->required();
  sim->add_option("--scene", scene, "scene section name")->required();
  sim->add_option("--duration-s", duration_s, "acquisition time in seconds")
      ->required();
  sim->add_option("--seed", seed, "RNG seed")->required();
  sim->add_option("--out", out, "output map file")->required();

  auto* dataset =
      app.add_subcommand("dataset", "build the full measurement dataset");
  dataset->add_option("--config", config_path, "run configuration file")
      ->required();
  dataset->add_option("--out", out, "output directory")->required();

  auto* analyze =
      app.add_subcommand("analyze", "run discrimination analyses on a dataset");
  analyze->add_option("manifest", manifest, "dataset manifest file")
      ->required();
  analyze->add_option("--method", method,
                      "kmeans, nmf, lda, or all (default all)");
  analyze->add_option("--config", config_path,
                      "run configuration file (analysis parameters)");
  analyze->add_option("--k-max", k_max_override,
                      "override the elbow-scan upper k");
  analyze->add_option("--out", out, "output directory")->required();

  auto* render = app.add_subcommand("render", "render a map as a PPM heatmap");
  render->add_option("map", map_file, "map file")->required();
  render->add_option("--out", out, "output .ppm path")->required();

  auto* reproduce = app.add_subcommand(
      "reproduce-paper",
      "imaging test + dataset + all analyses + renders, one output tree");
  reproduce->add_option("--config", config_path, "run configuration file")
      ->required();
  reproduce->add_option("--out", out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      cmd_simulate(config_path, scene, duration_s, seed, out);
    } else if (dataset->parsed()) {
      const RunConfig config = load_run_config(config_path);
      const BuiltDataset built = build_dataset(config, out);
      std::cout << built.manifest_path.string() << ": "
                << built.manifest.maps.size() << " maps, "
                << built.manifest.spectra.size() << " spectra\n";
    } else if (analyze->parsed()) {
      if (method != "kmeans" && method != "nmf" && method != "lda" &&
          method != "all")
        throw ConfigError("unknown method '" + method +
                          "' (kmeans|nmf|lda|all)");
      AnalysisParams params;
      if (!config_path.empty())
        params = load_run_config(config_path).analysis;
      if (k_max_override > 0) params.k_max = k_max_override;
      cmd_analyze(manifest, method, out, params);
    } else if (render->parsed()) {
      const LambdaYMap map = load_map(map_file);
      if (fs::path(out).has_parent_path())
        fs::create_directories(fs::path(out).parent_path());
      render_map_ppm(map, out);
    } else if (reproduce->parsed()) {
      cmd_reproduce(config_path, out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const AnalysisError& e) {
    std::cerr << "analysis error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
