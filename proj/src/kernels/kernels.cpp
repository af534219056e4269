#include "ghostspec/kernels.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

#include "kernels_detail.hpp"

namespace ghostspec::kernels {

namespace {

struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sqdist)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scale)(double*, std::size_t, double);
  void (*mul_ratio)(double*, const double*, const double*, std::size_t, double);
  void (*add_u32)(double*, const std::uint32_t*, std::size_t);
};

constexpr Table kScalarTable{
    detail::dot_scalar,   detail::sqdist_scalar,    detail::sum_scalar,
    detail::axpy_scalar,  detail::scale_scalar,     detail::mul_ratio_scalar,
    detail::add_u32_scalar};

#if defined(GHOSTSPEC_HAVE_AVX2)
constexpr Table kAvx2Table{
    detail::dot_avx2,   detail::sqdist_avx2,    detail::sum_avx2,
    detail::axpy_avx2,  detail::scale_avx2,     detail::mul_ratio_avx2,
    detail::add_u32_avx2};
#endif

bool cpu_has_avx2() {
#if defined(GHOSTSPEC_HAVE_AVX2) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend best_backend() {
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

const Table* table_for(Backend b) {
#if defined(GHOSTSPEC_HAVE_AVX2)
  if (b == Backend::avx2) return &kAvx2Table;
#else
  (void)b;
#endif
  return &kScalarTable;
}

std::atomic<Backend>& backend_slot() {
  static std::atomic<Backend> slot{best_backend()};
  return slot;
}

const Table& active_table() { return *table_for(backend_slot().load()); }

}  // namespace

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "unknown";
}

bool backend_available(Backend b) {
  if (b == Backend::scalar) return true;
  return cpu_has_avx2();
}

Backend active_backend() { return backend_slot().load(); }

void set_backend(Backend b) {
  if (!backend_available(b))
    throw std::invalid_argument(std::string("kernel backend not available: ") +
                                backend_name(b));
  backend_slot().store(b);
}

double dot(const double* a, const double* b, std::size_t n) {
  return active_table().dot(a, b, n);
}

double sqdist(const double* a, const double* b, std::size_t n) {
  return active_table().sqdist(a, b, n);
}

double sum(const double* a, std::size_t n) { return active_table().sum(a, n); }

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active_table().axpy(alpha, x, y, n);
}

void scale(double* a, std::size_t n, double alpha) {
  active_table().scale(a, n, alpha);
}

void mul_ratio(double* h, const double* num, const double* den, std::size_t n,
               double eps) {
  active_table().mul_ratio(h, num, den, n, eps);
}

void add_u32(double* dst, const std::uint32_t* src, std::size_t n) {
  active_table().add_u32(dst, src, n);
}

}  // namespace ghostspec::kernels
