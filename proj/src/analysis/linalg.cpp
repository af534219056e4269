#include <cmath>
#include <stdexcept>
#include <utility>

#include "ghostspec/kernels.hpp"
#include "ghostspec/matrix.hpp"

namespace ghostspec {

Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
  Mat c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (int l = 0; l < a.cols(); ++l) {
      kernels::axpy(a(i, l), b.row(l).data(), ci.data(), ci.size());
    }
  }
  return c;
}

Mat matmul_tn(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows())
    throw std::invalid_argument("matmul_tn: shape mismatch");
  Mat c(a.cols(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    auto bi = b.row(i);
    for (int l = 0; l < a.cols(); ++l) {
      kernels::axpy(a(i, l), bi.data(), c.row(l).data(), bi.size());
    }
  }
  return c;
}

Mat matmul_nt(const Mat& a, const Mat& b) {
  if (a.cols() != b.cols())
    throw std::invalid_argument("matmul_nt: shape mismatch");
  Mat c(a.rows(), b.rows());
  for (int i = 0; i < a.rows(); ++i) {
    auto ai = a.row(i);
    for (int j = 0; j < b.rows(); ++j) {
      c(i, j) = kernels::dot(ai, b.row(j));
    }
  }
  return c;
}

double frobenius_norm(const Mat& a) {
  return std::sqrt(kernels::dot(a.data(), a.data(), a.size()));
}

SymEig eigen_symmetric(const Mat& a, int max_sweeps) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("eigen_symmetric: matrix not square");
  const int n = a.rows();
  Mat m = a;
  Mat v(n, n);
  for (int i = 0; i < n; ++i) v(i, i) = 1.0;

  auto off_diag_mass = [&] {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += m(p, q) * m(p, q);
    return s;
  };

  const double scale = frobenius_norm(a);
  const double stop = (scale > 0 ? scale : 1.0) * 1e-15;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (std::sqrt(off_diag_mass()) <= stop) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  // sort ascending, reordering eigenvector columns to match
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (m(order[j], order[j]) < m(order[i], order[i]))
        std::swap(order[i], order[j]);

  SymEig out;
  out.values.resize(n);
  out.vectors = Mat(n, n);
  for (int i = 0; i < n; ++i) {
    out.values[i] = m(order[i], order[i]);
    for (int r = 0; r < n; ++r) out.vectors(r, i) = v(r, order[i]);
  }
  return out;
}

bool cholesky_lower(Mat& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("cholesky_lower: matrix not square");
  const int n = a.rows();
  for (int j = 0; j < n; ++j) {
    double d = a(j, j) - kernels::dot(a.row(j).data(), a.row(j).data(), j);
    if (d <= 0.0 || !std::isfinite(d)) return false;
    const double ljj = std::sqrt(d);
    a(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      a(i, j) = (a(i, j) - kernels::dot(a.row(i).data(), a.row(j).data(), j)) /
                ljj;
    }
    for (int k = j + 1; k < n; ++k) a(j, k) = 0.0;
  }
  return true;
}

std::vector<double> cholesky_solve(const Mat& l, std::span<const double> b) {
  const int n = l.rows();
  if (static_cast<int>(b.size()) != n)
    throw std::invalid_argument("cholesky_solve: size mismatch");
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    y[i] = (b[i] - kernels::dot(l.row(i).data(), y.data(), i)) / l(i, i);
  }
  std::vector<double> x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
    x[i] = s / l(i, i);
  }
  return x;
}

}  // namespace ghostspec
