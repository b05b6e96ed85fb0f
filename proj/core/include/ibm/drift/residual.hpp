#pragma once

#include <vector>

#include "ibm/drift/drift.hpp"

namespace ibm {

struct ResidualEstimate {
  double value = 0.0;
  double se = 0.0;
  /// One term per sample, so ladders can use paired differences.
  std::vector<double> per_sample;
};

/// Monte Carlo estimate of E sum_{x_i in S_k} |b_{r,s,p}(x_i, rest) - b_big(x_i, rest)|,
/// both drifts in cut-off form. Needs at least 2 samples.
ResidualEstimate drift_residual(const ModelSpec& model, const CutoffParams& params, const CutoffParams& big,
                                const std::vector<Configuration>& samples, double k,
                                GinibreVariant variant = GinibreVariant::kShifted);

/// Monte Carlo estimate of E |b_shifted^{(r)}(x) - b_confined^{(r)}(x)| for Ginibre,
/// averaged over the points x with |x| < center in each sample. Samples
/// without such a point contribute 0. Needs at least 2 samples.
ResidualEstimate ginibre_variant_gap(const std::vector<Configuration>& samples, double r, double center);

/// Mean and SE of the paired difference a - b of two residual ladders on the same samples.
std::pair<double, double> paired_difference(const ResidualEstimate& a, const ResidualEstimate& b);

}  // namespace ibm
