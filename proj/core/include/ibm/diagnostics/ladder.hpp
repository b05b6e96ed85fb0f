#pragma once

#include <cstdint>
#include <vector>

#include "ibm/diagnostics/distance.hpp"
#include "ibm/diagnostics/report.hpp"
#include "ibm/dynamics/integrator.hpp"
#include "ibm/pointfields/sampler.hpp"

namespace ibm {

/// Scheme-convergence sweep: lower scheme at each R against a large-domain
/// reference run, plus an optional upper-scheme rung.
struct LadderSpec {
  std::vector<double> R = {8.0, 16.0, 32.0};
  double R_big = 64.0;
  /// Upper-scheme rung compared with the lower rung of the same radius; <= 0 disables it.
  double upper_R = 32.0;
  double t = 0.5;
  double dt = 1e-3;
  DriftSpec drift;
  /// Radius of the window the intensity profiles are taken over.
  double analysis_window = 25.0;
  std::size_t replicas = 100;
  std::uint64_t seed = 1;
  /// A drop between consecutive rungs must exceed this many SE.
  double z_decrease = 2.0;
  /// |d_upper - d_lower| must stay within this many SE of the lower distance.
  double z_upper = 3.0;
  int bootstrap = 200;
  int workers = 0;

  void validate() const;
  nlohmann::json to_json() const;
};

struct LadderOutcome {
  LadderResult lower;
  bool has_upper = false;
  SchemeDistance upper;
  double upper_diff = 0.0;  // d(lower at upper_R) - d(upper)
  double upper_diff_se = 0.0;
  bool decreasing = false;
  bool upper_consistent = true;
  DiagnosticsReport report;
  /// Kept only when requested: [rung][replica], then reference and upper.
  std::vector<std::vector<PathRecord>> lower_paths;
  std::vector<PathRecord> reference_paths;
  std::vector<PathRecord> upper_paths;
};

/// Replica i draws its initial state with replica_seed(seed, i) and reuses that
/// seed for the noise of every rung, so rungs differ only through the scheme.
LadderOutcome run_ladder(const ModelSpec& model, const LadderSpec& spec, const ModelSampler& sampler,
                         bool keep_paths = false);

}  // namespace ibm
