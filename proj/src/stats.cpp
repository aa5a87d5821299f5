#include "embedlab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "embedlab/error.hpp"

namespace embedlab {

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Jacobi theta form, rapidly convergent for small lambda:
    // Q = 1 - sqrt(2 pi)/lambda * sum_{j>=1} exp(-(2j-1)^2 pi^2 / (8 lambda^2))
    constexpr double kPi = 3.14159265358979323846;
    const double factor = std::sqrt(2.0 * kPi) / lambda;
    const double x = kPi * kPi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int j = 1; j <= 20; ++j) {
      const double term = std::exp(-static_cast<double>((2 * j - 1)) *
                                   (2 * j - 1) * x);
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    return std::clamp(1.0 - factor * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term =
        std::exp(-2.0 * static_cast<double>(j) * j * lambda * lambda);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw DataError("ks_test: empty sample");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  KsResult result;
  // Sweep the pooled jump points; equal values advance both ECDFs before
  // the gap is measured, which handles ties.
  std::size_t ia = 0;
  std::size_t ib = 0;
  while (ia < a.size() || ib < b.size()) {
    double x;
    if (ia < a.size() && ib < b.size()) {
      x = std::min(a[ia], b[ib]);
    } else if (ia < a.size()) {
      x = a[ia];
    } else {
      x = b[ib];
    }
    while (ia < a.size() && a[ia] == x) ++ia;
    while (ib < b.size() && b[ib] == x) ++ib;
    result.statistic =
        std::max(result.statistic, std::abs(static_cast<double>(ia) / na -
                                            static_cast<double>(ib) / nb));
  }
  const double ne = na * nb / (na + nb);
  result.p_value = kolmogorov_sf(std::sqrt(ne) * result.statistic);
  return result;
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw DataError("mean of empty sample");
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double sample_sd(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double sem(const std::vector<double>& xs) {
  return sample_sd(xs) / std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace embedlab
