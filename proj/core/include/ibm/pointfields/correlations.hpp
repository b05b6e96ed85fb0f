#pragma once

#include <vector>

#include "ibm/core/configuration.hpp"
#include "ibm/pointfields/window.hpp"

namespace ibm {

struct CorrelationOptions {
  int bins = 20;
  double r_max = 2.0;
  /// Edge buffer between the sampling window and the estimation window;
  /// negative means max(r_max, 2).
  double buffer = -1.0;
};

struct CorrelationEstimate {
  Window inner;
  std::size_t n_samples = 0;
  double intensity = 0.0;
  double intensity_se = 0.0;
  std::vector<double> r_lo, r_hi;
  std::vector<double> g, g_se;
};

/// Ratio estimators of rho^1 and g over replicas.
///
/// Ordered pairs (x, y) with x in the inner window and y anywhere in the
/// sampling window are binned by |x - y|. g_k is the replica-mean pair
/// count divided by rho_hat^2 |inner| vol(bin k); its standard error comes
/// from the delta method over replicas. Needs at least 2 samples.
CorrelationEstimate estimate_correlations(const std::vector<Configuration>& samples, const Window& window,
                                          const CorrelationOptions& opt = {});

/// Replica-mean counts in radial shells [edges[k], edges[k+1]) divided by
/// the shell volume; SE from replica variance.
struct IntensityProfile {
  std::vector<double> edges;
  std::vector<double> value;
  std::vector<double> se;
};
IntensityProfile intensity_profile(const std::vector<Configuration>& samples, const std::vector<double>& edges);

}  // namespace ibm
