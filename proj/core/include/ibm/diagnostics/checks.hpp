#pragma once

#include <functional>
#include <vector>

#include "ibm/dynamics/path_io.hpp"

namespace ibm {

/// Upper standard-normal tail: int_t^inf (2 pi)^{-1/2} e^{-x^2/2} dx.
double erf_tail(double t);

struct IntegrabilityResult {
  double value = 0.0;
  bool finite = false;
  /// Contribution of each unit shell {k <= |x| < k+1} that was integrated.
  std::vector<double> shells;
};

/// int Erf((|x| - r)/T) rho(x) dx over R^d by Gauss-Legendre on unit shells.
/// Stops when a shell adds less than 1e-15 of the total past r + 40 T;
/// `finite` is false if that does not happen within `max_shells`.
IntegrabilityResult check_a4(const std::function<double(const Point&)>& intensity, double r, double T, int dim,
                  int max_shells = 100000);
IntegrabilityResult check_a4(double intensity, double r, double T, int dim);

struct IntegrabilityLiminf {
  std::vector<double> r;
  std::vector<double> value;  // Erf(r / sqrt((r+R)T)) rho |S_{r+R}|
  bool vanishes = false;
};

/// The liminf condition for a constant intensity, sampled on r = 1, 2, 4, ..., r_max.
IntegrabilityLiminf check_a4_liminf(double intensity, double R, double T, int dim, double r_max = 1e4);

/// Largest label that visits the closed ball of radius r at a recorded time <= T; 0 if none.
std::int64_t nbj_index(const PathRecord& path, double r, double T);

/// Minimum over frames of the distance between particles at least one of
/// which moves (all pairs when nothing moves), and, with `origin_boundary`,
/// of the moving particles' distance to 0. +inf when no pair exists.
double min_gap(const PathRecord& path, bool origin_boundary = false);
double min_gap(const Frame& frame, bool origin_boundary = false);

}  // namespace ibm
