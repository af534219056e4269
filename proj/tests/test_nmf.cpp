#include <doctest.h>

#include <cmath>

#include "ghostspec/analysis.hpp"
#include "ghostspec/errors.hpp"
#include "ghostspec/rng.hpp"

using namespace ghostspec;

namespace {

Mat outer(const std::vector<double>& w, const std::vector<double>& h) {
  Mat v(static_cast<int>(w.size()), static_cast<int>(h.size()));
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j)
      v(static_cast<int>(i), static_cast<int>(j)) = w[i] * h[j];
  return v;
}

Mat random_nonneg(RandomStream& rng, int rows, int cols) {
  Mat v(rows, cols);
  for (std::size_t i = 0; i < v.size(); ++i) v.data()[i] = rng.uniform() * 3.0;
  return v;
}

}  // namespace

TEST_CASE("an exact rank-1 matrix factorizes to numerical zero") {
  const Mat v = outer({0.5, 1.5, 2.0, 0.7, 1.1, 0.9},
                      {1.0, 0.2, 0.8, 2.0, 0.4, 1.3, 0.6, 0.9, 1.7});
  const NmfResult res = nmf(v, 1, 7, 2000, 1e-14);
  CHECK(res.residue_norm < 1e-6 * frobenius_norm(v));
}

TEST_CASE("distinct basis-vector rows factorize exactly at full rank") {
  Mat v(4, 4);
  for (int i = 0; i < 4; ++i) v(i, i) = 1.0;
  const NmfResult res = nmf(v, 4, 11, 20000, 1e-16);
  CHECK(res.residue_norm < 1e-6 * frobenius_norm(v));
}

TEST_CASE("the residue history is non-increasing and factors stay non-negative") {
  RandomStream rng(13);
  for (int instance = 0; instance < 5; ++instance) {
    const Mat v = random_nonneg(rng, 10, 8);
    const NmfResult res = nmf(v, 3, 100 + instance, 300, 0.0);
    for (std::size_t i = 1; i < res.residue_history.size(); ++i)
      CHECK(res.residue_history[i] <=
            res.residue_history[i - 1] * (1.0 + 1e-10) + 1e-300);
    for (std::size_t i = 0; i < res.w.size(); ++i)
      CHECK(res.w.data()[i] >= 0.0);
    for (std::size_t i = 0; i < res.h.size(); ++i)
      CHECK(res.h.data()[i] >= 0.0);
  }
}

TEST_CASE("reconstruction improves on the initial guess and fits well") {
  RandomStream rng(14);
  // synthesize a noisy rank-3 matrix
  Mat w(12, 3), h(3, 20);
  for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform() + 0.05;
  for (std::size_t i = 0; i < h.size(); ++i) h.data()[i] = rng.uniform() + 0.05;
  Mat v = matmul(w, h);
  for (std::size_t i = 0; i < v.size(); ++i)
    v.data()[i] = std::max(0.0, v.data()[i] + 0.001 * rng.normal());

  const NmfResult res = nmf(v, 3, 15, 3000, 1e-13);
  CHECK(res.residue_norm < 0.02 * frobenius_norm(v));
  CHECK(res.residue_history.front() > res.residue_norm);
}

TEST_CASE("dominant component picks the argmax with low-index ties") {
  Mat w(3, 3);
  w(0, 0) = 0.9; w(0, 1) = 0.05; w(0, 2) = 0.05;
  w(1, 0) = 0.0; w(1, 1) = 0.0;  w(1, 2) = 1.0;
  w(2, 0) = 0.5; w(2, 1) = 0.5;  w(2, 2) = 0.0;
  CHECK(dominant_component(w, 0) == 0);
  CHECK(dominant_component(w, 1) == 2);
  CHECK(dominant_component(w, 2) == 0);  // tie -> lowest index
  CHECK_THROWS_AS(dominant_component(w, 3), AnalysisError);
  CHECK_THROWS_AS(dominant_component(w, -1), AnalysisError);
}

TEST_CASE("invalid inputs are rejected") {
  RandomStream rng(15);
  Mat v = random_nonneg(rng, 5, 6);
  CHECK_THROWS_AS(nmf(v, 0, 1), AnalysisError);
  CHECK_THROWS_AS(nmf(v, 6, 1), AnalysisError);
  v(2, 3) = -0.5;
  CHECK_THROWS_AS(nmf(v, 2, 1), AnalysisError);
  CHECK_THROWS_AS(nmf(Mat(), 1, 1), AnalysisError);
}

TEST_CASE("fixed seeds reproduce the factorization bit for bit") {
  RandomStream rng(16);
  const Mat v = random_nonneg(rng, 8, 10);
  const NmfResult a = nmf(v, 2, 77, 200, 1e-12);
  const NmfResult b = nmf(v, 2, 77, 200, 1e-12);
  CHECK(a.w == b.w);
  CHECK(a.h == b.h);
  CHECK(a.residue_norm == b.residue_norm);
}
