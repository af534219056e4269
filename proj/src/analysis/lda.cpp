#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "ghostspec/analysis.hpp"
#include "ghostspec/errors.hpp"
#include "ghostspec/kernels.hpp"

namespace ghostspec {

namespace {

/// PCA basis from the sample Gram matrix (n << n_bins here, so the Gram
/// route is the cheap one). Columns of the returned matrix are orthonormal
/// directions in bin space, strongest variance first.
Mat gram_pca_basis(const Mat& centered, int want_dims) {
  const int n = centered.rows();
  Mat gram = matmul_nt(centered, centered);
  SymEig eig = eigen_symmetric(gram);

  const double lambda_max = std::max(eig.values.back(), 0.0);
  const double cutoff = lambda_max * 1e-12;
  std::vector<int> keep;  // ascending order indices of usable eigenpairs
  for (int i = n - 1; i >= 0 && static_cast<int>(keep.size()) < want_dims; --i)
    if (eig.values[i] > cutoff) keep.push_back(i);

  if (keep.empty()) throw AnalysisError("lda: data has no variance");

  // build each basis vector as a row, then transpose into column layout
  Mat basis_rows(static_cast<int>(keep.size()), centered.cols());
  for (std::size_t j = 0; j < keep.size(); ++j) {
    const int e = keep[j];
    const double inv_norm = 1.0 / std::sqrt(eig.values[e]);
    for (int i = 0; i < n; ++i)
      kernels::axpy(eig.vectors(i, e) * inv_norm, centered.row(i).data(),
                    basis_rows.row(static_cast<int>(j)).data(),
                    centered.cols());
  }
  Mat basis(centered.cols(), basis_rows.rows());
  for (int r = 0; r < basis.rows(); ++r)
    for (int c = 0; c < basis.cols(); ++c) basis(r, c) = basis_rows(c, r);
  return basis;
}

}  // namespace

LdaResult lda(const Mat& x, const std::vector<std::string>& labels,
              double regularization, int pca_predim) {
  const int n = x.rows();
  if (static_cast<int>(labels.size()) != n)
    throw AnalysisError("lda: one label per sample required");

  LdaResult res;
  {
    std::map<std::string, int> ids;  // sorted -> deterministic class order
    for (const auto& l : labels) {
      if (l.empty()) throw AnalysisError("lda: empty label");
      ids.emplace(l, 0);
    }
    int next = 0;
    for (auto& [name, id] : ids) {
      id = next++;
      res.class_names.push_back(name);
    }
    res.labels.reserve(n);
    for (const auto& l : labels) res.labels.push_back(ids.at(l));
  }
  const int n_classes = static_cast<int>(res.class_names.size());
  if (n_classes < 2) throw AnalysisError("lda: need at least 2 classes");
  {
    std::vector<int> per_class(n_classes, 0);
    for (int id : res.labels) ++per_class[id];
    for (int c = 0; c < n_classes; ++c)
      if (per_class[c] < 2)
        throw AnalysisError("lda: class '" + res.class_names[c] +
                            "' has fewer than 2 samples");
  }

  // center
  std::vector<double> mean(x.cols(), 0.0);
  for (int i = 0; i < n; ++i)
    kernels::axpy(1.0, x.row(i).data(), mean.data(), mean.size());
  kernels::scale(mean.data(), mean.size(), 1.0 / n);
  Mat centered(n, x.cols());
  for (int i = 0; i < n; ++i) {
    auto row = centered.row(i);
    for (int c = 0; c < x.cols(); ++c) row[c] = x(i, c) - mean[c];
  }

  if (pca_predim <= 0) pca_predim = std::max(n - n_classes, 1);
  pca_predim = std::min(pca_predim, std::min(n - 1, x.cols()));
  Mat basis = gram_pca_basis(centered, pca_predim);
  const int p = basis.cols();
  Mat z = matmul(centered, basis);  // n x p reduced coordinates

  // class means and scatter matrices in reduced space
  std::vector<int> class_count(n_classes, 0);
  Mat mu(n_classes, p);
  for (int i = 0; i < n; ++i) {
    kernels::axpy(1.0, z.row(i).data(), mu.row(res.labels[i]).data(), p);
    ++class_count[res.labels[i]];
  }
  for (int c = 0; c < n_classes; ++c)
    kernels::scale(mu.row(c).data(), p, 1.0 / class_count[c]);

  Mat sw(p, p), sb(p, p);
  std::vector<double> diff(p);
  for (int i = 0; i < n; ++i) {
    const auto zi = z.row(i);
    const auto mc = mu.row(res.labels[i]);
    for (int j = 0; j < p; ++j) diff[j] = zi[j] - mc[j];
    for (int j = 0; j < p; ++j)
      kernels::axpy(diff[j], diff.data(), sw.row(j).data(), p);
  }
  for (int c = 0; c < n_classes; ++c) {
    const auto mc = mu.row(c);  // z is centered, so the global mean is 0
    for (int j = 0; j < p; ++j)
      kernels::axpy(class_count[c] * mc[j], mc.data(), sb.row(j).data(), p);
  }

  double trace = 0.0;
  for (int j = 0; j < p; ++j) trace += sw(j, j);
  if (regularization > 0.0 && trace > 0.0) {
    const double ridge = regularization * trace / p;
    for (int j = 0; j < p; ++j) sw(j, j) += ridge;
  }

  Mat l = sw;
  if (!cholesky_lower(l))
    throw AnalysisError(
        "lda: within-class scatter is singular; raise the regularization");

  // M = L^-1 Sb L^-T via two triangular solves, then a symmetric eigensolve
  Mat half(p, p);  // L^-1 Sb
  for (int col = 0; col < p; ++col) {
    std::vector<double> b(p);
    for (int r = 0; r < p; ++r) b[r] = sb(r, col);
    for (int r = 0; r < p; ++r) {
      double s = b[r];
      for (int k = 0; k < r; ++k) s -= l(r, k) * half(k, col);
      half(r, col) = s / l(r, r);
    }
  }
  Mat m(p, p);  // (L^-1 (L^-1 Sb)^T)^T, symmetric up to rounding
  for (int col = 0; col < p; ++col) {
    for (int r = 0; r < p; ++r) {
      double s = half(col, r);
      for (int k = 0; k < r; ++k) s -= l(r, k) * m(k, col);
      m(r, col) = s / l(r, r);
    }
  }
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      const double avg = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = m(j, i) = avg;
    }

  SymEig eig = eigen_symmetric(m);
  const int n_dirs = std::min(n_classes - 1, p);

  res.eigenvalues.resize(n_dirs);
  Mat dirs_reduced(p, n_dirs);
  for (int d = 0; d < n_dirs; ++d) {
    const int e = p - 1 - d;  // descending eigenvalues
    res.eigenvalues[d] = eig.values[e];
    // v = L^-T y restores the generalized eigenvector
    std::vector<double> y(p);
    for (int r = 0; r < p; ++r) y[r] = eig.vectors(r, e);
    std::vector<double> v(p);
    for (int r = p - 1; r >= 0; --r) {
      double s = y[r];
      for (int k = r + 1; k < p; ++k) s -= l(k, r) * v[k];
      v[r] = s / l(r, r);
    }
    for (int r = 0; r < p; ++r) dirs_reduced(r, d) = v[r];
  }

  res.directions = matmul(basis, dirs_reduced);  // n_bins x n_dirs

  // deterministic sign: largest-magnitude original-space component positive
  for (int d = 0; d < n_dirs; ++d) {
    int arg = 0;
    for (int r = 1; r < res.directions.rows(); ++r)
      if (std::abs(res.directions(r, d)) > std::abs(res.directions(arg, d)))
        arg = r;
    if (res.directions(arg, d) < 0.0) {
      for (int r = 0; r < res.directions.rows(); ++r)
        res.directions(r, d) = -res.directions(r, d);
      for (int r = 0; r < p; ++r) dirs_reduced(r, d) = -dirs_reduced(r, d);
    }
  }

  res.projected = matmul(z, dirs_reduced);
  res.class_means = Mat(n_classes, n_dirs);
  for (int i = 0; i < n; ++i)
    kernels::axpy(1.0, res.projected.row(i).data(),
                  res.class_means.row(res.labels[i]).data(), n_dirs);
  for (int c = 0; c < n_classes; ++c)
    kernels::scale(res.class_means.row(c).data(), n_dirs,
                   1.0 / class_count[c]);
  return res;
}

std::vector<int> nearest_mean_classes(const LdaResult& result) {
  std::vector<int> out(result.projected.rows());
  for (int i = 0; i < result.projected.rows(); ++i) {
    int best = 0;
    double best_d = kernels::sqdist(result.projected.row(i),
                                    result.class_means.row(0));
    for (int c = 1; c < result.class_means.rows(); ++c) {
      const double d = kernels::sqdist(result.projected.row(i),
                                       result.class_means.row(c));
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    out[i] = best;
  }
  return out;
}

}  // namespace ghostspec
