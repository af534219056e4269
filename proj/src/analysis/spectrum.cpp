#include <algorithm>
#include <cmath>
#include <string>

#include "ghostspec/analysis.hpp"
#include "ghostspec/errors.hpp"
#include "ghostspec/kernels.hpp"

namespace ghostspec {

SpectrumVector extract_spectrum(const LambdaYMap& map, int y_row_lo,
                                int y_row_hi) {
  if (y_row_lo < 0 || y_row_hi > map.n_spatial || y_row_lo >= y_row_hi)
    throw AnalysisError("extract_spectrum: row range [" +
                        std::to_string(y_row_lo) + ", " +
                        std::to_string(y_row_hi) + ") invalid for " +
                        std::to_string(map.n_spatial) + " rows");
  SpectrumVector s;
  s.values.assign(map.n_spectral, 0.0);
  s.lambda_centers_nm = map.lambda_centers_nm;
  s.y_row_lo = y_row_lo;
  s.y_row_hi = y_row_hi;
  for (int row = y_row_lo; row < y_row_hi; ++row) {
    kernels::add_u32(s.values.data(),
                     map.counts.data() +
                         static_cast<std::size_t>(row) * map.n_spectral,
                     map.n_spectral);
  }
  return s;
}

SpectrumVector normalize(const SpectrumVector& spectrum) {
  const double total = kernels::sum(spectrum.values);
  if (!(total > 0.0))
    throw AnalysisError("normalize: spectrum has zero total");
  SpectrumVector out = spectrum;
  kernels::scale(out.values.data(), out.values.size(), 1.0 / total);
  return out;
}

Mat spectra_matrix(const std::vector<SpectrumVector>& spectra) {
  if (spectra.empty()) throw AnalysisError("spectra_matrix: no spectra");
  const int n_bins = static_cast<int>(spectra.front().values.size());
  Mat m(static_cast<int>(spectra.size()), n_bins);
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    if (static_cast<int>(spectra[i].values.size()) != n_bins)
      throw AnalysisError("spectra_matrix: spectrum length mismatch at index " +
                          std::to_string(i));
    auto row = m.row(static_cast<int>(i));
    std::copy(spectra[i].values.begin(), spectra[i].values.end(), row.begin());
  }
  return m;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  const double na = kernels::dot(a, a);
  const double nb = kernels::dot(b, b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return kernels::dot(a, b) / std::sqrt(na * nb);
}

}  // namespace ghostspec
