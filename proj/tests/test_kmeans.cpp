#include <doctest.h>

#include <cmath>
#include <set>

#include "ghostspec/analysis.hpp"
#include "ghostspec/errors.hpp"
#include "ghostspec/rng.hpp"
#include "support/brute_force_kmeans.hpp"

using namespace ghostspec;

namespace {

Mat points_from(std::initializer_list<std::initializer_list<double>> rows) {
  const int r = static_cast<int>(rows.size());
  const int c = static_cast<int>(rows.begin()->size());
  Mat m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Mat random_points(RandomStream& rng, int n, int dim, double scale = 1.0) {
  Mat m(n, dim);
  for (std::size_t i = 0; i < m.size(); ++i)
    m.data()[i] = scale * (rng.uniform() - 0.5);
  return m;
}

}  // namespace

TEST_CASE("k equal to n gives zero residual") {
  RandomStream rng(1);
  const Mat pts = random_points(rng, 6, 3);
  const KMeansResult res = kmeans_best(pts, 6, 7, 5);
  CHECK(res.residual == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("k equal to one gives the coordinatewise mean") {
  const Mat pts = points_from({{1.0, 2.0}, {3.0, 6.0}, {5.0, 4.0}});
  const KMeansResult res = kmeans(pts, 1, 3);
  CHECK(res.centroids(0, 0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(res.centroids(0, 1) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("the four-point instance has the known optimal split") {
  const Mat pts =
      points_from({{0.0, 1.0}, {0.0, 1.2}, {5.0, 0.0}, {5.2, 0.0}});
  const KMeansResult res = kmeans_best(pts, 2, 11, 20);
  CHECK(res.residual == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(testsupport::brute_force_kmeans_sse(pts, 2) ==
        doctest::Approx(0.04).epsilon(1e-12));

  std::set<int> firsts = {res.assignments[0], res.assignments[1]};
  std::set<int> seconds = {res.assignments[2], res.assignments[3]};
  CHECK(firsts.size() == 1);
  CHECK(seconds.size() == 1);
  CHECK(*firsts.begin() != *seconds.begin());

  const int c01 = res.assignments[0];
  CHECK(res.centroids(c01, 0) == doctest::Approx(0.0).scale(1.0));
  CHECK(res.centroids(c01, 1) == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(res.centroids(1 - c01, 0) == doctest::Approx(5.1).epsilon(1e-12));
  CHECK(res.centroids(1 - c01, 1) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("best-of-restarts reaches the brute-force optimum on tiny instances") {
  RandomStream rng(5);
  for (int instance = 0; instance < 20; ++instance) {
    const int n = 4 + static_cast<int>(rng.uniform() * 5);  // 4..8
    const int k = 2 + static_cast<int>(rng.uniform() * 2);  // 2..3
    const int dim = 2 + static_cast<int>(rng.uniform() * 2);
    const Mat pts = random_points(rng, n, dim, 4.0);
    const double oracle = testsupport::brute_force_kmeans_sse(pts, k);
    const KMeansResult res = kmeans_best(pts, k, 1000 + instance, 64);
    CHECK(res.residual <= oracle * (1.0 + 1e-9) + 1e-12);
    CHECK(res.residual >= oracle * (1.0 - 1e-9) - 1e-12);
  }
}

TEST_CASE("the residual history never increases and the result is a fixpoint") {
  RandomStream rng(6);
  for (int instance = 0; instance < 10; ++instance) {
    const Mat pts = random_points(rng, 30, 4, 3.0);
    const KMeansResult res = kmeans(pts, 4, instance);
    for (std::size_t i = 1; i < res.residual_history.size(); ++i)
      CHECK(res.residual_history[i] <=
            res.residual_history[i - 1] * (1.0 + 1e-12) + 1e-300);
    // assignments index the nearest centroid
    for (int p = 0; p < pts.rows(); ++p) {
      double best = 1e300;
      int arg = -1;
      for (int c = 0; c < res.centroids.rows(); ++c) {
        double d = 0;
        for (int j = 0; j < pts.cols(); ++j) {
          const double diff = pts(p, j) - res.centroids(c, j);
          d += diff * diff;
        }
        if (d < best) {
          best = d;
          arg = c;
        }
      }
      CHECK(res.assignments[p] == arg);
    }
  }
}

TEST_CASE("three tight blobs produce the textbook elbow") {
  // in d dimensions an extra split of one isotropic blob removes only
  // ~(2/pi)/d of that blob's residual, so high-dimensional blobs keep the
  // k=4 vs k=3 plateau well above 0.8
  RandomStream rng(7);
  const int dim = 16, per_blob = 10;
  Mat pts(3 * per_blob, dim);
  for (int i = 0; i < pts.rows(); ++i) {
    const int blob = i / per_blob;
    for (int j = 0; j < dim; ++j)
      pts(i, j) = (j == blob ? 10.0 : 0.0) + 0.05 * rng.normal();
  }
  const auto curve = kmeans_elbow(pts, pts.rows(), 17, 10);
  REQUIRE(curve.size() == static_cast<std::size_t>(pts.rows()));
  for (std::size_t i = 1; i < curve.size(); ++i)
    CHECK(curve[i].second <= curve[i - 1].second * (1.0 + 1e-12) + 1e-300);
  CHECK(curve[2].second / curve[1].second < 0.2);  // k=3 vs k=2
  CHECK(curve[3].second / curve[2].second > 0.8);  // k=4 vs k=3
  CHECK(curve.back().second == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("fixed seeds reproduce the run bit for bit") {
  RandomStream rng(8);
  const Mat pts = random_points(rng, 12, 5);
  const KMeansResult a = kmeans_best(pts, 3, 99, 8);
  const KMeansResult b = kmeans_best(pts, 3, 99, 8);
  CHECK(a.residual == b.residual);
  CHECK(a.assignments == b.assignments);
  CHECK(a.centroids == b.centroids);
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(kmeans(Mat(), 1, 0), AnalysisError);
  RandomStream rng(9);
  const Mat pts = random_points(rng, 4, 2);
  CHECK_THROWS_AS(kmeans(pts, 5, 0), AnalysisError);
  CHECK_THROWS_AS(kmeans(pts, 0, 0), AnalysisError);
  CHECK_THROWS_AS(kmeans_elbow(pts, 5, 0, 3), AnalysisError);
}
