#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ibm/diagnostics/report.hpp"
#include "ibm/dynamics/integrator.hpp"
#include "ibm/pointfields/correlations.hpp"

namespace ibm {

struct InvarianceOptions {
  CorrelationOptions corr;
  /// Equality tolerance in standard errors.
  double tol_se = 3.0;
};

/// Configurations of every path at the recorded time nearest to t.
/// Throws ConfigError if some path has no frame within half a step of t.
std::vector<Configuration> samples_at(const std::vector<PathRecord>& paths, double t);

/// Windowed intensity and binned g at t = 0 against each checkpoint; every
/// quantity must agree within tol_se combined standard errors.
DiagnosticsReport invariance_from_paths(const std::vector<PathRecord>& paths, const std::vector<double>& checkpoints,
                                        const Window& window, const InvarianceOptions& opt = {});

using InitSampler = std::function<Configuration(std::uint64_t seed)>;

/// Samples `replicas` initial states, runs the scheme on each and compares as above.
/// Replica i uses replica_seed(seed, i) for both its initial state and its noise.
DiagnosticsReport invariance_test(const ModelSpec& model, const SchemeParams& scheme, const InitSampler& sampler,
                                  const std::vector<double>& checkpoints, const Window& window, std::size_t replicas,
                                  std::uint64_t seed, const InvarianceOptions& opt = {});

/// Runs replicas in parallel; replica i gets replica_seed(seed, i).
std::vector<PathRecord> run_replicas(const ModelSpec& model, const SchemeParams& scheme, const InitSampler& sampler,
                                     std::size_t replicas, std::uint64_t seed, int workers = 0);

}  // namespace ibm
