#include "ibm/diagnostics/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ibm/errors.hpp"
#include "ibm/pointfields/window.hpp"
#include "ibm/util/quadrature.hpp"

namespace ibm {

double erf_tail(double t) { return 0.5 * std::erfc(t / std::sqrt(2.0)); }

IntegrabilityResult check_a4(const std::function<double(const Point&)>& intensity, double r, double T, int dim,
                  int max_shells) {
  if (!(T > 0.0)) throw InvalidParameter("check_a4: T must be positive");
  if (dim != 1 && dim != 2) throw InvalidParameter("check_a4: dimension must be 1 or 2");
  const auto nodes = gauss_legendre(32, 0.0, 1.0);
  constexpr int kAngles = 32;
  IntegrabilityResult out;
  double total = 0.0;
  const double settle = std::max(0.0, r) + 40.0 * T;
  for (int k = 0; k < max_shells; ++k) {
    double shell = 0.0;
    for (std::size_t q = 0; q < nodes.nodes.size(); ++q) {
      const double u = k + nodes.nodes[q];
      const double e = erf_tail((u - r) / T);
      double rho = 0.0;
      if (dim == 1) {
        rho = intensity(Point(u)) + intensity(Point(-u));
      } else {
        for (int a = 0; a < kAngles; ++a) {
          const double phi = 2.0 * M_PI * (a + 0.5) / kAngles;
          rho += intensity(Point(u * std::cos(phi), u * std::sin(phi)));
        }
        rho *= 2.0 * M_PI * u / kAngles;
      }
      shell += nodes.weights[q] * e * rho;
    }
    out.shells.push_back(shell);
    total += shell;
    if (k + 1 > settle && std::fabs(shell) <= 1e-15 * std::max(std::fabs(total), 1e-300)) {
      out.finite = std::isfinite(total);
      break;
    }
    if (k + 1 > settle && total == 0.0 && shell == 0.0) {
      out.finite = true;
      break;
    }
  }
  out.value = total;
  return out;
}

IntegrabilityResult check_a4(double intensity, double r, double T, int dim) {
  return check_a4([intensity](const Point&) { return intensity; }, r, T, dim);
}

IntegrabilityLiminf check_a4_liminf(double intensity, double R, double T, int dim, double r_max) {
  if (!(T > 0.0) || !(R > 0.0)) throw InvalidParameter("check_a4_liminf: R and T must be positive");
  IntegrabilityLiminf out;
  for (double r = 1.0; r <= r_max; r *= 2.0) {
    out.r.push_back(r);
    out.value.push_back(erf_tail(r / std::sqrt((r + R) * T)) * intensity * ball_volume(r + R, dim));
  }
  // Vanishing: the tail of the sequence is below 1e-12 and no longer growing.
  const std::size_t n = out.value.size();
  out.vanishes = n >= 2 && out.value[n - 1] < 1e-12 && out.value[n - 1] <= out.value[n - 2];
  return out;
}

std::int64_t nbj_index(const PathRecord& path, double r, double T) {
  std::int64_t best = 0;
  for (const auto& f : path.frames) {
    if (f.time > T + 1e-12 * std::max(1.0, T)) continue;
    for (const auto& p : f.particles) {
      if (p.position.norm() <= r) best = std::max(best, p.label);
    }
  }
  return best;
}

double min_gap(const Frame& frame, bool origin_boundary) {
  const auto& ps = frame.particles;
  const bool any_moving = std::any_of(ps.begin(), ps.end(), [](const Particle& p) { return !p.frozen; });
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (origin_boundary && !ps[i].frozen) gap = std::min(gap, ps[i].position.norm());
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      if (any_moving && ps[i].frozen && ps[j].frozen) continue;
      gap = std::min(gap, distance(ps[i].position, ps[j].position));
    }
  }
  return gap;
}

double min_gap(const PathRecord& path, bool origin_boundary) {
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& f : path.frames) gap = std::min(gap, min_gap(f, origin_boundary));
  return gap;
}

}  // namespace ibm
