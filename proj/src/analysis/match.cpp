#include <algorithm>
#include <numeric>
#include <string>

#include "ghostspec/analysis.hpp"
#include "ghostspec/errors.hpp"

namespace ghostspec {

ComponentMatch match_components(const Mat& components, const Mat& references) {
  const int n = components.rows();
  if (n != references.rows())
    throw AnalysisError("match_components: " + std::to_string(n) +
                        " components vs " + std::to_string(references.rows()) +
                        " references");
  if (components.cols() != references.cols())
    throw AnalysisError("match_components: spectrum length mismatch");
  if (n > 8)
    throw AnalysisError("match_components: too many components (max 8)");

  Mat cos(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      cos(i, j) = cosine_similarity(components.row(i), references.row(j));

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best_perm = perm;
  double best_total = -1e300;
  do {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += cos(i, perm[i]);
    if (total > best_total) {
      best_total = total;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  ComponentMatch out;
  out.reference_of = best_perm;
  out.total = best_total;
  out.cosines.resize(n);
  for (int i = 0; i < n; ++i) out.cosines[i] = cos(i, best_perm[i]);
  return out;
}

}  // namespace ghostspec
