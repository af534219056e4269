#pragma once

// Statistical oracles used by tests: kept independent of the library code
// they check (only <cmath>, no ghostspec headers).

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace testsupport {

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

/// Regularized lower incomplete gamma P(s, x) by series (x < s + 1) or
/// continued fraction; standard Numerical-Recipes-style evaluation.
inline double gamma_p(double s, double x) {
  if (x < 0.0 || s <= 0.0) throw std::invalid_argument("gamma_p domain");
  if (x == 0.0) return 0.0;
  const double lgs = std::lgamma(s);
  if (x < s + 1.0) {
    double term = 1.0 / s;
    double sum = term;
    double a = s;
    for (int i = 0; i < 1000; ++i) {
      a += 1.0;
      term *= x / a;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + s * std::log(x) - lgs);
  }
  // Lentz continued fraction for Q(s, x)
  double b = x + 1.0 - s;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  const double q = std::exp(-x + s * std::log(x) - lgs) * h;
  return 1.0 - q;
}

/// Survival function of the chi-square distribution (upper tail p-value).
inline double chi_square_sf(double statistic, double dof) {
  return 1.0 - gamma_p(dof / 2.0, statistic / 2.0);
}

}  // namespace testsupport
