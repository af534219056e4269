#include "kernels_detail.hpp"

namespace ghostspec::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sqdist_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double sum_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double* a, std::size_t n, double alpha) {
  for (std::size_t i = 0; i < n; ++i) a[i] *= alpha;
}

void mul_ratio_scalar(double* h, const double* num, const double* den,
                      std::size_t n, double eps) {
  for (std::size_t i = 0; i < n; ++i) h[i] *= num[i] / (den[i] + eps);
}

void add_u32_scalar(double* dst, const std::uint32_t* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += static_cast<double>(src[i]);
}

}  // namespace ghostspec::kernels::detail
