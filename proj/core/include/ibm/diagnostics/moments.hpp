#pragma once

#include <cstdint>
#include <vector>

#include "ibm/diagnostics/report.hpp"
#include "ibm/diagnostics/stats.hpp"
#include "ibm/dynamics/path_io.hpp"

namespace ibm {

struct MomentOptions {
  /// Tagged particle; label 1 has the smallest initial modulus.
  std::int64_t label = 1;
  double slope_lo = 1.8;
  double slope_hi = 2.2;
};

struct MomentResult {
  std::vector<double> lags;
  std::vector<double> moment;  // E|X_{t+lag} - X_t|^4, averaged over start times then replicas
  std::vector<double> moment_se;
  LinearFit fit;               // log moment against log lag, weighted by the delta-method SEs
  double constant = 0.0;       // exp(intercept)
  double ci_lo = 0.0, ci_hi = 0.0;  // 95% interval for the slope
  std::size_t replicas_used = 0;
  double slope_lo = 1.8, slope_hi = 2.2;
  bool pass = false;

  DiagnosticsReport report() const;
};

/// Fourth-moment growth of the tagged particle's increments. Lags must be
/// multiples of the (uniform) frame spacing; at least 3 lags are required.
/// Replicas where the tagged particle is frozen at time 0 are excluded.
MomentResult moment4_check(const std::vector<PathRecord>& paths, const std::vector<double>& lags,
                           const MomentOptions& opt = {});

}  // namespace ibm
