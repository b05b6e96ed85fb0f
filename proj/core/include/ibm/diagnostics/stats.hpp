#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ibm/core/point.hpp"

namespace ibm {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

/// Sample mean and its standard error (sd / sqrt(n)); se = 0 for n < 2.
MeanSe mean_se(std::span<const double> v);

/// Kolmogorov limit distribution: P(sqrt(n) D > lambda) as n -> infinity.
double kolmogorov_q(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample KS test against a continuous CDF (Stephens' small-sample correction).
KsResult ks_one_sample(std::vector<double> data, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// W1 between two empirical laws on the line (any sizes).
double wasserstein1(std::vector<double> a, std::vector<double> b);
/// W1 between two empirical laws in R^d with equal sample sizes (optimal assignment).
double wasserstein1(const std::vector<Point>& a, const std::vector<Point>& b);

/// Minimum-cost perfect matching on a square cost matrix (row-major, n x n).
/// Returns the column assigned to each row.
std::vector<std::size_t> hungarian(const std::vector<double>& cost, std::size_t n);

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double se_intercept = 0.0;
  double se_slope = 0.0;
  double cov = 0.0;  // covariance of (intercept, slope)
};

/// y = a + b x. With empty `sigma`: ordinary least squares, errors from the
/// residual variance. Otherwise weighted by 1/sigma^2 with sigma taken as known.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y, std::span<const double> sigma = {});

/// Bootstrap standard error of stat(indices) over `reps` resamples of [0, n).
double bootstrap_se(std::size_t n, const std::function<double(const std::vector<std::size_t>&)>& stat, int reps,
                    std::uint64_t seed);

/// Standard normal upper tail P(Z > z).
double normal_upper(double z);

}  // namespace ibm
