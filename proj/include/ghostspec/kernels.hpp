#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace ghostspec::kernels {

/// Arithmetic inner loops shared by the analysis stack and map handling.
///
/// Every kernel has a scalar reference implementation and (on x86-64) an
/// AVX2 variant. The backend is selected once at runtime from CPU features
/// and can be forced, which is how the equivalence tests pin both paths.
/// Elementwise kernels (axpy, scale, mul_ratio, add_u32) produce bitwise
/// identical results on every backend; reductions (dot, sqdist, sum) may
/// differ by rounding since lane sums reassociate.

enum class Backend { scalar, avx2 };

const char* backend_name(Backend b);
bool backend_available(Backend b);

/// Currently active backend (best available until set_backend is called).
Backend active_backend();

/// Force a backend. Throws std::invalid_argument if unavailable.
void set_backend(Backend b);

double dot(const double* a, const double* b, std::size_t n);
double sqdist(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double* a, std::size_t n, double alpha);

/// h[i] *= num[i] / (den[i] + eps), the multiplicative-update step.
void mul_ratio(double* h, const double* num, const double* den, std::size_t n,
               double eps);

/// dst[i] += src[i] with integer counts widened to double (counts are kept
/// <= 2^31 - 1, see LambdaYMap).
void add_u32(double* dst, const std::uint32_t* src, std::size_t n);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return dot(a.data(), b.data(), a.size());
}
inline double sqdist(std::span<const double> a, std::span<const double> b) {
  return sqdist(a.data(), b.data(), a.size());
}
inline double sum(std::span<const double> a) { return sum(a.data(), a.size()); }

}  // namespace ghostspec::kernels
