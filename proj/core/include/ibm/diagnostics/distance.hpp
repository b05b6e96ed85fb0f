#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ibm/diagnostics/report.hpp"
#include "ibm/dynamics/path_io.hpp"
#include "ibm/pointfields/window.hpp"

namespace ibm {

struct DistanceOptions {
  std::int64_t label = 1;
  /// Radial shells [0, radius] for the intensity profiles.
  int profile_bins = 8;
  int bootstrap = 200;
  std::uint64_t seed = 1;
  /// Replica i of A and B share initial state and noise: resample indices jointly.
  bool paired = false;
};

struct SchemeDistance {
  double w1 = 0.0;
  double w1_se = 0.0;
  double intensity_dev = 0.0;
  double intensity_dev_se = 0.0;
  std::size_t n_a = 0, n_b = 0;
};

/// X_t - X_0 of the tagged particle in every replica; empty where it is absent.
std::vector<std::optional<Point>> tagged_displacements(const std::vector<PathRecord>& paths, std::int64_t label,
                                                       double t);

/// (i) W1 between the laws of the tagged displacement at time t, and
/// (ii) max over radial shells of |rho_A - rho_B| within the window.
/// Standard errors resample the replicas of A and B, independently unless
/// `opt.paired` is set.
SchemeDistance scheme_distance(const std::vector<PathRecord>& a, const std::vector<PathRecord>& b, const Window& window,
                               double t, const DistanceOptions& opt = {});

struct LadderResult {
  std::vector<SchemeDistance> rungs;  // distance of each rung to the reference
  /// w1[k] - w1[k+1] and its SE from a joint bootstrap over replica indices.
  std::vector<double> diff;
  std::vector<double> diff_se;

  /// Point estimates strictly decreasing and each drop exceeding z_tol SE.
  bool strictly_decreasing(double z_tol) const;
};

/// Distances of each rung to the reference. All sets must have the same number
/// of replicas, with replica i of every set sharing initial state and noise, so
/// every standard error comes from a joint resampling of replica indices.
LadderResult ladder_distance(const std::vector<std::vector<PathRecord>>& rungs, const std::vector<PathRecord>& reference,
                             const Window& window, double t, const DistanceOptions& opt = {});

}  // namespace ibm
