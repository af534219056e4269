#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "ghostspec/analysis.hpp"
#include "ghostspec/errors.hpp"
#include "ghostspec/kernels.hpp"
#include "ghostspec/rng.hpp"

namespace ghostspec {

namespace {

// Guard in the update denominators only; small enough not to disturb the
// monotone-objective property beyond rounding.
constexpr double kDenomEps = 1e-12;

double residue(const Mat& v, const Mat& w, const Mat& h) {
  Mat wh = matmul(w, h);
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = v.data()[i] - wh.data()[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace

NmfResult nmf(const Mat& v, int rank, std::uint64_t seed, int max_iter,
              double tol) {
  const int n = v.rows();
  const int m = v.cols();
  if (n == 0 || m == 0) throw AnalysisError("nmf: empty input matrix");
  if (rank < 1 || rank > std::min(n, m))
    throw AnalysisError("nmf: rank " + std::to_string(rank) +
                        " outside [1, min(n, m) = " +
                        std::to_string(std::min(n, m)) + "]");
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v.data()[i] < 0.0)
      throw AnalysisError("nmf: input matrix has negative entries");

  // positive random init, scaled so W H starts at the magnitude of V
  double vmean = kernels::sum(v.data(), v.size()) / static_cast<double>(v.size());
  if (vmean <= 0.0) vmean = 1.0;
  const double init_scale = std::sqrt(vmean / rank);
  RandomStream rng(seed);
  Mat w(n, rank), h(rank, m);
  for (std::size_t i = 0; i < w.size(); ++i)
    w.data()[i] = (0.1 + 0.9 * rng.uniform()) * init_scale;
  for (std::size_t i = 0; i < h.size(); ++i)
    h.data()[i] = (0.1 + 0.9 * rng.uniform()) * init_scale;

  NmfResult res;
  res.residue_history.push_back(residue(v, w, h));
  // rounding floor of the residue computation itself, for the monotonicity
  // assertion once the fit approaches exactness
  const double residue_floor = 1e-12 * frobenius_norm(v);
  (void)residue_floor;

  int iter = 0;
  for (; iter < max_iter; ++iter) {
    // H <- H .* (W^T V) ./ (W^T W H)
    {
      Mat num = matmul_tn(w, v);
      Mat den = matmul(matmul_tn(w, w), h);
      kernels::mul_ratio(h.data(), num.data(), den.data(), h.size(), kDenomEps);
    }
    // W <- W .* (V H^T) ./ (W H H^T)
    {
      Mat num = matmul_nt(v, h);
      Mat den = matmul(w, matmul_nt(h, h));
      kernels::mul_ratio(w.data(), num.data(), den.data(), w.size(), kDenomEps);
    }
    const double r = residue(v, w, h);
    const double prev = res.residue_history.back();
    assert(r <= prev * (1.0 + 1e-10) + residue_floor);
    res.residue_history.push_back(r);
    if (std::abs(prev - r) <= tol * std::max(prev, 1e-300)) {
      ++iter;
      break;
    }
  }

  res.w = std::move(w);
  res.h = std::move(h);
  res.residue_norm = res.residue_history.back();
  res.iterations = iter;
  return res;
}

int dominant_component(const Mat& w, int sample_index) {
  if (sample_index < 0 || sample_index >= w.rows())
    throw AnalysisError("dominant_component: sample index out of range");
  const auto row = w.row(sample_index);
  int best = 0;
  for (int c = 1; c < w.cols(); ++c)
    if (row[c] > row[best]) best = c;
  return best;
}

}  // namespace ghostspec
