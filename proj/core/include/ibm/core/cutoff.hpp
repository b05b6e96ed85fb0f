#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ibm/core/configuration.hpp"
#include "ibm/core/point.hpp"

namespace ibm {

/// 3u^2 - 2u^3 on [0, 1], clamped outside.
double smoothstep3(double u);
/// 6u^5 - 15u^4 + 10u^3 on [0, 1], clamped outside.
double smoothstep5(double u);

/// Spatial cut-off: 1 for |x| <= t-1, 0 for |x| >= t, cubic smoothstep between.
double chi(double t, const Point& x);
double chi(double t, double modulus);

/// Short-distance cut-off: 0 for |x| <= 1/p, 1 for |x| >= 2/p.
double upsilon(double p, const Point& x);
double upsilon(double p, double modulus);

/// theta(t) = 1 - smoothstep5(t). Equals 1 on (-inf, 0], 0 on [1, inf), max |theta'| = 15/8.
double theta(double t);
double theta_prime(double t);
inline constexpr double kThetaPrimeMax = 1.875;

/// The sequence a(1), a(2), ... bounding shell counts: s(S_k) <= a(k).
///
/// Only finitely many terms are stored. Past the last one the sequence
/// continues linearly with the last increment (or +1 if only one term).
class ShellBounds {
 public:
  ShellBounds() = default;
  explicit ShellBounds(std::vector<std::int64_t> values);

  /// a(k) for k >= 1.
  std::int64_t operator()(int k) const;
  /// a_+(k) = 1 + a(k+1).
  ShellBounds plus() const;
  bool empty() const { return values_.empty(); }
  const std::vector<std::int64_t>& values() const { return values_; }

  /// a(k) = ceil(2 * intensity * vol(S_k)) + k + level, k = 1..kmax.
  static ShellBounds for_level(int level, double intensity, int dim, int kmax = 64);

  /// True if b(k) > a(k) for k = 1..kmax.
  bool strictly_below(const ShellBounds& b, int kmax = 64) const;

 private:
  std::vector<std::int64_t> values_;
};

struct CutoffParams {
  double r = 2.0;
  double s = 4.0;
  double p = 2.0;
  ShellBounds a;
  double rho_s = 0.0;

  /// Throws InvalidParameter unless r > 1, s > 1, p > 0, a nonempty and r < s.
  void validate() const;
};

/// True if s(S_k) <= a(k) for every k.
bool in_compact(const ShellBounds& a, const Configuration& config);

/// Distance-like functional whose level set {d = 0} is K(a).
double distance_to_compact(const ShellBounds& a, const Configuration& config);

/// distance_to_compact for ascending moduli with entry `skip` left out
/// (skip >= sorted.size() keeps every entry).
double distance_to_compact_sorted(const ShellBounds& a, std::span<const double> sorted, std::size_t skip);

/// theta(distance_to_compact(a, config)).
double varpi(const ShellBounds& a, const Configuration& config);
inline double varpi(const CutoffParams& params, const Configuration& config) {
  return varpi(params.a, config);
}

/// Gradient of varpi with respect to every point, analytic (zero where theta' vanishes).
std::vector<Point> varpi_gradient(const ShellBounds& a, const Configuration& config);

}  // namespace ibm
