#pragma once

#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "ibm/core/point.hpp"
#include "ibm/drift/drift.hpp"

namespace ibm {

/// lower: reflecting boundary on dS_R, exterior frozen, count conserved.
/// upper: particles crossing dS_R die, new ones enter from an outer shell.
/// reference: everything inside S_R moves freely; leavers freeze.
enum class Scheme { kLower, kUpper, kReference };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct SchemeParams {
  Scheme scheme = Scheme::kLower;
  double R = 16.0;
  double dt = 1e-3;
  double t_end = 1.0;
  DriftSpec drift;
  /// Boundary-contact tolerance; negative means R * 1e-6.
  double reflect_eps = -1.0;
  /// Width of the shell ghosts are drawn from (upper); negative means 6 sqrt(dt).
  double birth_shell = -1.0;
  /// Intensity of ghosts near dS_R (upper); negative means the model intensity at R.
  double birth_intensity = -1.0;
  /// Record a frame every `record_stride` steps (and at the end).
  int record_stride = 10;
  int max_retries = 8;
  int workers = 0;

  double eps() const { return reflect_eps < 0.0 ? R * 1e-6 : reflect_eps; }
  double shell() const;
  std::int64_t total_steps() const;
  /// Throws InvalidParameter on inconsistent values.
  void validate() const;

  nlohmann::json to_json() const;
};

/// Radial projection onto the closed ball: (x, 0) inside, (x R/|x|, |x| - R) outside.
std::pair<Point, double> reflect_project(const Point& x, double R);

}  // namespace ibm
