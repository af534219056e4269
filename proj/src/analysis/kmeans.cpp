#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "ghostspec/analysis.hpp"
#include "ghostspec/errors.hpp"
#include "ghostspec/kernels.hpp"
#include "ghostspec/rng.hpp"

namespace ghostspec {

namespace {

void check_inputs(const Mat& points, int k) {
  if (points.rows() == 0) throw AnalysisError("kmeans: empty input");
  if (k < 1 || k > points.rows())
    throw AnalysisError("kmeans: k = " + std::to_string(k) +
                        " outside [1, n_samples = " +
                        std::to_string(points.rows()) + "]");
}

int nearest_centroid(const Mat& centroids, std::span<const double> p,
                     double* dist_out = nullptr) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int c = 0; c < centroids.rows(); ++c) {
    const double d = kernels::sqdist(centroids.row(c), p);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (dist_out) *dist_out = best_d;
  return best;
}

/// Farthest remaining point from the chosen set; ties -> lowest index.
int farthest_point(const Mat& points, const Mat& centroids, int n_chosen) {
  int best = 0;
  double best_d = -1.0;
  for (int i = 0; i < points.rows(); ++i) {
    double d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < n_chosen; ++c)
      d = std::min(d, kernels::sqdist(centroids.row(c), points.row(i)));
    if (d > best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

Mat farthest_point_init(const Mat& points, int k, RandomStream& rng) {
  Mat centroids(k, points.cols());
  const int first = static_cast<int>(rng.uniform() * points.rows());
  std::copy(points.row(first).begin(), points.row(first).end(),
            centroids.row(0).begin());
  for (int c = 1; c < k; ++c) {
    const int pick = farthest_point(points, centroids, c);
    std::copy(points.row(pick).begin(), points.row(pick).end(),
              centroids.row(c).begin());
  }
  return centroids;
}

Mat d2_weighted_init(const Mat& points, int k, RandomStream& rng) {
  Mat centroids(k, points.cols());
  const int n = points.rows();
  const int first = static_cast<int>(rng.uniform() * n);
  std::copy(points.row(first).begin(), points.row(first).end(),
            centroids.row(0).begin());
  std::vector<double> d2(n);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double d = std::numeric_limits<double>::infinity();
      for (int j = 0; j < c; ++j)
        d = std::min(d, kernels::sqdist(centroids.row(j), points.row(i)));
      d2[i] = d;
      total += d;
    }
    int pick;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        target -= d2[i];
        if (target < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<int>(rng.uniform() * n);  // all points coincide
    }
    std::copy(points.row(pick).begin(), points.row(pick).end(),
              centroids.row(c).begin());
  }
  return centroids;
}

KMeansResult lloyd(const Mat& points, Mat centroids, int max_iter, double tol) {
  const int n = points.rows();
  const int k = centroids.rows();
  const int dim = points.cols();

  KMeansResult res;
  res.assignments.assign(n, -1);
  std::vector<int> counts(k);

  double prev_residual = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    bool changed = false;
    double residual = 0.0;
    for (int i = 0; i < n; ++i) {
      double d;
      const int c = nearest_centroid(centroids, points.row(i), &d);
      if (c != res.assignments[i]) {
        res.assignments[i] = c;
        changed = true;
      }
      residual += d;
    }
    assert(res.residual_history.empty() ||
           residual <= res.residual_history.back() * (1.0 + 1e-12) + 1e-300);
    res.residual_history.push_back(residual);

    // means of each non-empty cluster; an emptied cluster keeps its centroid
    Mat sums(k, dim);
    std::fill(counts.begin(), counts.end(), 0);
    for (int i = 0; i < n; ++i) {
      kernels::axpy(1.0, points.row(i).data(),
                    sums.row(res.assignments[i]).data(), dim);
      ++counts[res.assignments[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      kernels::scale(sums.row(c).data(), dim, 1.0 / counts[c]);
      std::copy(sums.row(c).begin(), sums.row(c).end(),
                centroids.row(c).begin());
    }

    const bool converged =
        !changed ||
        (std::isfinite(prev_residual) &&
         std::abs(prev_residual - residual) <= tol * std::max(residual, 1.0));
    prev_residual = residual;
    if (converged) {
      ++iter;
      break;
    }
  }

  // final assignment is a fixpoint: recompute against the final centroids
  double residual = 0.0;
  for (int i = 0; i < n; ++i) {
    double d;
    res.assignments[i] = nearest_centroid(centroids, points.row(i), &d);
    residual += d;
  }
  if (res.residual_history.empty() || residual < res.residual_history.back())
    res.residual_history.push_back(residual);
  res.residual = residual;
  res.centroids = std::move(centroids);
  res.iterations = iter;
  return res;
}

/// C(n, k), saturating just above `cap` so callers can test "fits in cap".
std::uint64_t n_choose_k_capped(int n, int k, std::uint64_t cap) {
  if (k < 0 || k > n) return 0;
  std::uint64_t c = 1;
  for (int i = 0; i < k; ++i) {
    c = c * (n - i) / (i + 1);
    if (c > cap) return cap + 1;
  }
  return c;
}

/// rank-th k-combination of {0..n-1} in lexicographic order.
std::vector<int> combination_at(std::uint64_t rank, int n, int k) {
  std::vector<int> out;
  out.reserve(k);
  int next = 0;
  for (int slot = 0; slot < k; ++slot) {
    for (int v = next; v < n; ++v) {
      const std::uint64_t tail =
          n_choose_k_capped(n - v - 1, k - slot - 1, ~0ULL - 1);
      if (rank < tail) {
        out.push_back(v);
        next = v + 1;
        break;
      }
      rank -= tail;
    }
  }
  return out;
}

KMeansResult run_restart(const Mat& points, int k, std::uint64_t seed,
                         int restart, int max_iter, double tol) {
  RandomStream rng(seed, static_cast<std::uint64_t>(restart));
  Mat init = restart == 0 ? farthest_point_init(points, k, rng)
                          : d2_weighted_init(points, k, rng);
  return lloyd(points, std::move(init), max_iter, tol);
}

}  // namespace

KMeansResult kmeans(const Mat& points, int k, std::uint64_t seed, int max_iter,
                    double tol) {
  check_inputs(points, k);
  return run_restart(points, k, seed, 0, max_iter, tol);
}

KMeansResult kmeans_best(const Mat& points, int k, std::uint64_t seed,
                         int restarts, int max_iter, double tol) {
  check_inputs(points, k);
  if (restarts < 1) restarts = 1;
  const int n = points.rows();

  // when every distinct initial center subset fits in the restart budget,
  // enumerate them instead of sampling; tiny instances then cannot get
  // unlucky with their starts
  const std::uint64_t subsets =
      n_choose_k_capped(n, k, static_cast<std::uint64_t>(restarts));
  const bool exhaustive =
      restarts > 1 && subsets <= static_cast<std::uint64_t>(restarts - 1);

  KMeansResult best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    KMeansResult cand;
    if (r > 0 && exhaustive) {
      if (static_cast<std::uint64_t>(r - 1) >= subsets) break;
      Mat init(k, points.cols());
      const auto members = combination_at(r - 1, n, k);
      for (int c = 0; c < k; ++c)
        std::copy(points.row(members[c]).begin(), points.row(members[c]).end(),
                  init.row(c).begin());
      cand = lloyd(points, std::move(init), max_iter, tol);
    } else {
      cand = run_restart(points, k, seed, r, max_iter, tol);
    }
    if (cand.residual < best.residual) best = std::move(cand);
  }
  return best;
}

std::vector<std::pair<int, double>> kmeans_elbow(const Mat& points, int k_max,
                                                 std::uint64_t seed,
                                                 int restarts) {
  check_inputs(points, k_max);
  std::vector<std::pair<int, double>> curve;
  curve.reserve(k_max);
  KMeansResult prev;
  for (int k = 1; k <= k_max; ++k) {
    KMeansResult best = kmeans_best(points, k, seed, restarts);
    if (k > 1) {
      // warm start from the previous best plus the farthest point, so the
      // curve cannot go up when a fresh restart lands in a worse basin
      Mat init(k, points.cols());
      for (int c = 0; c < k - 1; ++c)
        std::copy(prev.centroids.row(c).begin(), prev.centroids.row(c).end(),
                  init.row(c).begin());
      const int extra = farthest_point(points, init, k - 1);
      std::copy(points.row(extra).begin(), points.row(extra).end(),
                init.row(k - 1).begin());
      KMeansResult chained = lloyd(points, std::move(init), 200, 1e-12);
      if (chained.residual < best.residual) best = std::move(chained);
    }
    curve.emplace_back(k, best.residual);
    prev = std::move(best);
  }
  return curve;
}

}  // namespace ghostspec
