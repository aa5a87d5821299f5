#pragma once

#include <vector>

namespace embedlab {

struct KsResult {
  double statistic = 0.0;  // sup |ECDF_a - ECDF_b|
  double p_value = 1.0;    // asymptotic two-sided
};

// Two-sample Kolmogorov-Smirnov test. D is the exact maximum ECDF gap
// (ties handled); the p-value comes from the asymptotic Kolmogorov
// distribution at lambda = sqrt(n_a*n_b/(n_a+n_b)) * D.
KsResult ks_test(std::vector<double> a, std::vector<double> b);

// Complementary CDF of the Kolmogorov distribution,
// Q(lambda) = 2 * sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_sf(double lambda);

double mean(const std::vector<double>& xs);
// Sample standard deviation (n-1 denominator); 0 for n < 2.
double sample_sd(const std::vector<double>& xs);
// Standard error of the mean; 0 for n < 2.
double sem(const std::vector<double>& xs);

}  // namespace embedlab
