#pragma once

#include <cstddef>
#include <cstdint>

// Per-backend entry points. Only the dispatcher and the equivalence tests
// include this header; everything else goes through ghostspec/kernels.hpp.

namespace ghostspec::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n);
double sqdist_scalar(const double* a, const double* b, std::size_t n);
double sum_scalar(const double* a, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
void scale_scalar(double* a, std::size_t n, double alpha);
void mul_ratio_scalar(double* h, const double* num, const double* den,
                      std::size_t n, double eps);
void add_u32_scalar(double* dst, const std::uint32_t* src, std::size_t n);

#if defined(GHOSTSPEC_HAVE_AVX2)
double dot_avx2(const double* a, const double* b, std::size_t n);
double sqdist_avx2(const double* a, const double* b, std::size_t n);
double sum_avx2(const double* a, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
void scale_avx2(double* a, std::size_t n, double alpha);
void mul_ratio_avx2(double* h, const double* num, const double* den,
                    std::size_t n, double eps);
void add_u32_avx2(double* dst, const std::uint32_t* src, std::size_t n);
#endif

}  // namespace ghostspec::kernels::detail
