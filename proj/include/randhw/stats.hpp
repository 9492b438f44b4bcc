#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace rhw {

// Pairwise (cascade) summation: O(log n) error growth and, importantly here,
// a result independent of how work was partitioned across threads.
double pairwise_sum(const double* data, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

double mean(const std::vector<double>& v);
// Unbiased sample standard deviation.
double sample_sd(const std::vector<double>& v);
// Standard error of the sample mean.
double standard_error(const std::vector<double>& v);

// Lower (inf-style) empirical quantile: smallest order statistic x_(k) with
// k/n >= p. p in (0,1).
double quantile_lower(std::vector<double> sample, double p);

// Two-sided Kolmogorov-Smirnov statistic of a sample against a continuous CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

// Asymptotic KS p-value with the Stephens small-sample correction.
double ks_pvalue(double d, std::size_t n);

} // namespace rhw
