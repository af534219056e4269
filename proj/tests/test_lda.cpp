#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "ghostspec/analysis.hpp"
#include "ghostspec/errors.hpp"
#include "ghostspec/rng.hpp"

using namespace ghostspec;

TEST_CASE("two separated 1-D classes give one strongly separating direction") {
  Mat x(4, 1);
  x(0, 0) = 0.0;
  x(1, 0) = 0.1;
  x(2, 0) = 10.0;
  x(3, 0) = 10.1;
  const LdaResult res = lda(x, {"lo", "lo", "hi", "hi"});
  REQUIRE(res.eigenvalues.size() == 1);
  REQUIRE(res.projected.cols() == 1);

  const double mean_gap = std::abs(res.class_means(0, 0) - res.class_means(1, 0));
  double within = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double d = res.projected(i, 0) - res.class_means(res.labels[i], 0);
    within = std::max(within, std::abs(d));
  }
  CHECK(mean_gap / within > 100.0);

  const auto predicted = nearest_mean_classes(res);
  for (int i = 0; i < 4; ++i) CHECK(predicted[i] == res.labels[i]);
}

TEST_CASE("collinear class means kill the second discriminant") {
  // three classes with exactly collinear sample means: members sit at
  // mean +- delta, so the empirical means are exact
  const int dim = 5;
  Mat x(6, dim);
  const double line[3] = {0.0, 1.0, 2.0};  // means at t * direction
  std::vector<std::string> labels;
  int row = 0;
  RandomStream rng(3);
  std::vector<double> delta(dim);
  for (auto& d : delta) d = 0.01 * (rng.uniform() + 0.1);
  for (int c = 0; c < 3; ++c) {
    for (int s = 0; s < 2; ++s) {
      for (int j = 0; j < dim; ++j) {
        const double mean_j = line[c] * (j + 1.0);
        x(row, j) = mean_j + (s == 0 ? delta[j] : -delta[j]);
      }
      labels.push_back("c" + std::to_string(c));
      ++row;
    }
  }
  const LdaResult res = lda(x, labels);
  REQUIRE(res.eigenvalues.size() == 2);
  CHECK(res.eigenvalues[1] < 1e-6 * res.eigenvalues[0]);
}

TEST_CASE("three well-separated gaussian classes classify perfectly") {
  RandomStream rng(5);
  const int dim = 40;
  const int per_class[3] = {8, 8, 7};
  Mat x(23, dim);
  std::vector<std::string> labels;
  int row = 0;
  for (int c = 0; c < 3; ++c) {
    for (int s = 0; s < per_class[c]; ++s) {
      for (int j = 0; j < dim; ++j)
        x(row, j) = (j % 3 == c ? 3.0 : 0.0) + 0.15 * rng.normal();
      labels.push_back("class" + std::to_string(c));
      ++row;
    }
  }
  const LdaResult res = lda(x, labels);
  REQUIRE(res.eigenvalues.size() == 2);
  CHECK(res.eigenvalues[0] >= res.eigenvalues[1]);

  const auto predicted = nearest_mean_classes(res);
  for (int i = 0; i < 23; ++i) CHECK(predicted[i] == res.labels[i]);

  // directions are near-orthonormal in the within-class scatter metric:
  // the projected within-class scatter is close to the identity
  Mat scatter(2, 2);
  for (int i = 0; i < 23; ++i)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        scatter(a, b) += (res.projected(i, a) - res.class_means(res.labels[i], a)) *
                         (res.projected(i, b) - res.class_means(res.labels[i], b));
  // the ridge shifts the metric by ~regularization, so orthogonality holds
  // at that scale rather than machine precision
  CHECK(scatter(0, 0) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(scatter(1, 1) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(scatter(0, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-4));
}

TEST_CASE("global positive rescaling leaves the decisions unchanged") {
  RandomStream rng(6);
  Mat x(12, 10);
  std::vector<std::string> labels;
  for (int i = 0; i < 12; ++i) {
    const int c = i / 6;
    for (int j = 0; j < 10; ++j)
      x(i, j) = (c == 0 ? 1.0 : -1.0) * (j % 2) + 0.2 * rng.normal();
    labels.push_back(c == 0 ? "a" : "b");
  }
  Mat scaled = x;
  for (std::size_t i = 0; i < scaled.size(); ++i) scaled.data()[i] *= 1000.0;

  const auto base = nearest_mean_classes(lda(x, labels));
  const auto big = nearest_mean_classes(lda(scaled, labels));
  CHECK(base == big);
}

TEST_CASE("degenerate and invalid inputs are rejected") {
  Mat x(4, 3);
  CHECK_THROWS_AS(lda(x, {"a", "a", "a", "a"}), AnalysisError);   // one class
  CHECK_THROWS_AS(lda(x, {"a", "a", "a", "b"}), AnalysisError);   // 1 sample in b
  CHECK_THROWS_AS(lda(x, {"a", "a", "b"}), AnalysisError);        // label count
  CHECK_THROWS_AS(lda(x, {"a", "a", "", "b"}), AnalysisError);    // empty label

  // identical samples per class: zero within-class scatter cannot be ridged
  Mat dup(4, 3);
  for (int j = 0; j < 3; ++j) {
    dup(0, j) = dup(1, j) = 1.0 + j;
    dup(2, j) = dup(3, j) = 5.0 - j;
  }
  CHECK_THROWS_AS(lda(dup, {"a", "a", "b", "b"}), AnalysisError);
}

TEST_CASE("eigenvalues come out in non-increasing order") {
  RandomStream rng(7);
  Mat x(18, 12);
  std::vector<std::string> labels;
  for (int i = 0; i < 18; ++i) {
    const int c = i % 3;
    for (int j = 0; j < 12; ++j)
      x(i, j) = 2.0 * ((j + c) % 4 == 0) + 0.3 * rng.normal();
    labels.push_back("k" + std::to_string(c));
  }
  const LdaResult res = lda(x, labels);
  for (std::size_t i = 1; i < res.eigenvalues.size(); ++i)
    CHECK(res.eigenvalues[i] <= res.eigenvalues[i - 1] * (1.0 + 1e-12));
}
