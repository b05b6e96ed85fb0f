#include "ibm/util/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "ibm/errors.hpp"

namespace ibm {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw InvalidParameter("Gauss-Legendre order must be positive");
  QuadratureRule q;
  q.nodes.resize(static_cast<std::size_t>(n));
  q.weights.resize(static_cast<std::size_t>(n));
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    q.nodes[lo] = mid - half * x;
    q.nodes[hi] = mid + half * x;
    q.weights[lo] = half * w;
    q.weights[hi] = half * w;
  }
  return q;
}

QuadratureRule composite_gauss_legendre(int panels, int order, double a, double b) {
  if (panels < 1) throw InvalidParameter("panel count must be positive");
  QuadratureRule q;
  const double h = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const auto p = gauss_legendre(order, a + k * h, a + (k + 1) * h);
    q.nodes.insert(q.nodes.end(), p.nodes.begin(), p.nodes.end());
    q.weights.insert(q.weights.end(), p.weights.begin(), p.weights.end());
  }
  return q;
}

}  // namespace ibm
