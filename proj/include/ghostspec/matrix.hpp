#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ghostspec {

/// Dense row-major matrix of doubles. Sized for this project's problems
/// (hundreds of columns, tens of rows), not a general BLAS replacement.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int r, int c) {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  double operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  std::span<double> row(int r) {
    return {data_.data() + static_cast<std::size_t>(r) * cols_,
            static_cast<std::size_t>(cols_)};
  }
  std::span<const double> row(int r) const {
    return {data_.data() + static_cast<std::size_t>(r) * cols_,
            static_cast<std::size_t>(cols_)};
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

  bool operator==(const Mat&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// C = A * B
Mat matmul(const Mat& a, const Mat& b);
/// C = A^T * B
Mat matmul_tn(const Mat& a, const Mat& b);
/// C = A * B^T
Mat matmul_nt(const Mat& a, const Mat& b);

double frobenius_norm(const Mat& a);

/// Symmetric eigendecomposition by cyclic Jacobi rotations. Values come out
/// ascending; vectors(r, i) is component r of the i-th eigenvector.
struct SymEig {
  std::vector<double> values;
  Mat vectors;
};

/// A must be symmetric; tolerance is on the off-diagonal Frobenius mass.
SymEig eigen_symmetric(const Mat& a, int max_sweeps = 64);

/// In-place lower Cholesky A = L L^T; returns false if A is not positive
/// definite. On success the strict upper triangle is zeroed.
bool cholesky_lower(Mat& a);

/// Solve L y = b (forward) and L^T x = y (backward) for lower-triangular L.
std::vector<double> cholesky_solve(const Mat& l, std::span<const double> b);

}  // namespace ghostspec
