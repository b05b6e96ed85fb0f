#include "ibm/pointfields/kernels.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>

#include "ibm/errors.hpp"

namespace ibm {

double sine_kernel(double x, double y) {
  const double u = std::numbers::pi * (x - y);
  if (std::fabs(u) < 1e-4) {
    const double u2 = u * u;
    return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
  }
  return std::sin(u) / u;
}

namespace {

double bessel_diag(double alpha, double x) {
  if (x == 0.0) return 0.0;
  const double s = std::sqrt(x);
  const double j = boost::math::cyl_bessel_j(alpha, s);
  return 0.25 * (j * j - boost::math::cyl_bessel_j(alpha + 1.0, s) * boost::math::cyl_bessel_j(alpha - 1.0, s));
}

}  // namespace

double bessel_kernel(double alpha, double x, double y) {
  if (x < 0.0 || y < 0.0) throw DomainError("Bessel kernel is defined on [0, inf)");
  const double scale = std::max({1.0, x, y});
  // The off-diagonal formula cancels catastrophically near the diagonal;
  // the midpoint diagonal is within O(|x-y|^2) there.
  if (std::fabs(x - y) < 1e-6 * scale) return bessel_diag(alpha, 0.5 * (x + y));
  const double sx = std::sqrt(x);
  const double sy = std::sqrt(y);
  const double jx = boost::math::cyl_bessel_j(alpha, sx);
  const double jy = boost::math::cyl_bessel_j(alpha, sy);
  const double djx = boost::math::cyl_bessel_j_prime(alpha, sx);
  const double djy = boost::math::cyl_bessel_j_prime(alpha, sy);
  return (jx * sy * djy - sx * djx * jy) / (2.0 * (x - y));
}

std::complex<double> ginibre_kernel(const Point& x, const Point& y) {
  const double d2 = (x - y).norm2();
  const double phase = x[1] * y[0] - x[0] * y[1];
  return std::polar(std::exp(-0.5 * d2) / std::numbers::pi, phase);
}

std::complex<double> kernel_eval(const ModelSpec& model, const Point& x, const Point& y) {
  switch (model.kind) {
    case ModelKind::kSineBeta:
      if (model.beta != 2.0) {
        throw UnsupportedModel("kernel_eval: sine with beta != 2 has no scalar kernel");
      }
      return sine_kernel(x[0], y[0]);
    case ModelKind::kBessel:
      return bessel_kernel(model.alpha, x[0], y[0]);
    case ModelKind::kGinibre:
      return ginibre_kernel(x, y);
    case ModelKind::kRuellePair:
      break;
  }
  throw UnsupportedModel("kernel_eval: model " + model.id() + " is not determinantal");
}

double pair_correlation(const ModelSpec& model, const Point& x, const Point& y) {
  const double kxx = kernel_eval(model, x, x).real();
  const double kyy = kernel_eval(model, y, y).real();
  if (!(kxx > 0.0) || !(kyy > 0.0)) throw DegenerateIntensity("pair_correlation: zero intensity");
  if (x == y) return 0.0;
  return 1.0 - std::norm(kernel_eval(model, x, y)) / (kxx * kyy);
}

}  // namespace ibm
