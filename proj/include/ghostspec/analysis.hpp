#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ghostspec/detection.hpp"
#include "ghostspec/matrix.hpp"

namespace ghostspec {

/// Per-wavelength-bin counts from spatial integration of a map region.
struct SpectrumVector {
  std::vector<double> values;
  std::vector<double> lambda_centers_nm;
  std::string label;      // class tag; empty = unlabeled
  std::string source_id;  // map file or run this came from
  int y_row_lo = 0;       // integrated rows, half-open [lo, hi)
  int y_row_hi = 0;

  bool operator==(const SpectrumVector&) const = default;
};

/// Sum counts over spatial rows [y_row_lo, y_row_hi). Integer counts sum
/// exactly in doubles, so extraction is additive under map merging.
SpectrumVector extract_spectrum(const LambdaYMap& map, int y_row_lo,
                                int y_row_hi);

/// Unit-sum scaling. Throws AnalysisError on an all-zero spectrum.
SpectrumVector normalize(const SpectrumVector& spectrum);

/// Stack spectra as matrix rows; throws AnalysisError on length mismatch.
Mat spectra_matrix(const std::vector<SpectrumVector>& spectra);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

// ---------------------------------------------------------------- k-means

struct KMeansResult {
  Mat centroids;                 // k x n_bins
  std::vector<int> assignments;  // per input row, index of nearest centroid
  double residual;               // sum of squared distances to assigned centroid
  int iterations;
  std::vector<double> residual_history;  // non-increasing across iterations
};

/// One seeded Lloyd run. Restart 0 of kmeans_best seeds by greedy
/// farthest-point from an RNG-chosen first center; ties break to the lowest
/// index everywhere, so a (points, k, seed) triple fixes the result.
KMeansResult kmeans(const Mat& points, int k, std::uint64_t seed,
                    int max_iter = 200, double tol = 1e-12);

/// Best of `restarts` runs: restart 0 uses the farthest-point init; later
/// restarts draw D^2-weighted centers, except that when every distinct
/// k-subset of points fits in the budget the subsets are enumerated
/// outright. Lowest residual wins, then lowest restart index.
KMeansResult kmeans_best(const Mat& points, int k, std::uint64_t seed,
                         int restarts, int max_iter = 200, double tol = 1e-12);

/// Best residual per k in 1..k_max. Each k also tries the best (k-1)
/// solution's centroids plus the farthest point as one extra start, which
/// makes the curve non-increasing by construction.
std::vector<std::pair<int, double>> kmeans_elbow(const Mat& points, int k_max,
                                                 std::uint64_t seed,
                                                 int restarts);

// ------------------------------------------------------------------- NMF

struct NmfResult {
  Mat w;  // n_samples x rank, non-negative weights
  Mat h;  // rank x n_bins, non-negative components
  double residue_norm;  // ||V - WH||_F
  int iterations;
  std::vector<double> residue_history;  // non-increasing
};

/// Multiplicative-update factorization of a non-negative matrix, Frobenius
/// objective, positive random init from `seed`. Stops when the relative
/// residue change drops below tol or after max_iter rounds.
NmfResult nmf(const Mat& v, int rank, std::uint64_t seed, int max_iter = 500,
              double tol = 1e-9);

/// argmax over the weight row of one sample; ties -> lowest index.
int dominant_component(const Mat& w, int sample_index);

// ------------------------------------------------------------------- LDA

struct LdaResult {
  Mat directions;   // n_bins x n_dirs, discriminants in the input space
  Mat projected;    // n_samples x n_dirs
  Mat class_means;  // n_classes x n_dirs, means in projected space
  std::vector<double> eigenvalues;  // between/within ratio, non-increasing
  std::vector<std::string> class_names;  // class id -> label
  std::vector<int> labels;               // per sample, index into class_names
};

/// Fisher discriminants with PCA pre-reduction (the bin count far exceeds
/// the sample count, so the within-class scatter is singular without it)
/// and a ridge term reg * trace(Sw)/dim on the within-class scatter.
/// pca_predim <= 0 selects n_samples - n_classes. Directions are normalized
/// to unit within-class scatter metric and returned with at most
/// n_classes - 1 columns.
LdaResult lda(const Mat& x, const std::vector<std::string>& labels,
              double regularization = 1e-6, int pca_predim = 0);

/// Nearest-class-mean decision in projected space, per sample.
std::vector<int> nearest_mean_classes(const LdaResult& result);

// ------------------------------------------------------- component matching

struct ComponentMatch {
  std::vector<int> reference_of;  // component i -> matched reference index
  std::vector<double> cosines;    // cosine of each matched pair
  double total;
};

/// One-to-one assignment maximizing total cosine similarity, exhaustive
/// over permutations (component counts here are <= 8).
ComponentMatch match_components(const Mat& components, const Mat& references);

}  // namespace ghostspec
