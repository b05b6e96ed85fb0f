#include "ibm/pointfields/gaussian_ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "ibm/errors.hpp"
#include "ibm/random/variates.hpp"

namespace ibm {

namespace {

// Semicircle distribution function on [-1, 1].
double semicircle_cdf(double u) {
  u = std::clamp(u, -1.0, 1.0);
  return 0.5 + (u * std::sqrt(1.0 - u * u) + std::asin(u)) / std::numbers::pi;
}

}  // namespace

int default_ensemble_size(const Interval& window) {
  const double extent = std::max(std::fabs(window.lo), std::fabs(window.hi));
  return static_cast<int>(std::ceil(20.0 * extent)) + 200;
}

Configuration sample_gaussian_ensemble_bulk(double beta, const Interval& window, int n, std::uint64_t seed) {
  if (beta != 1.0 && beta != 2.0 && beta != 4.0) {
    throw UnsupportedModel("Gaussian ensemble route supports beta in {1,2,4}");
  }
  if (!(window.hi > window.lo)) throw InvalidParameter("ensemble window must be a nonempty interval");
  if (n <= 0) n = default_ensemble_size(window);
  const double extent = std::max(std::fabs(window.lo), std::fabs(window.hi));
  if (extent > 0.25 * n) throw InvalidParameter("ensemble window reaches outside the bulk; increase n");

  Rng rng(seed, 0);
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::VectorXd diag(nn);
  Eigen::VectorXd sub(nn > 1 ? nn - 1 : 0);
  const double s = std::sqrt(0.5);
  // (1/sqrt 2) N(0, 2) on the diagonal is a standard normal.
  for (Eigen::Index i = 0; i < nn; ++i) diag[i] = rng.normal();
  for (Eigen::Index i = 0; i + 1 < nn; ++i) {
    sub[i] = s * chi_variate(rng, beta * static_cast<double>(nn - 1 - i));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("tridiagonal eigensolver failed");

  const double radius = std::sqrt(2.0 * beta * n);
  Configuration out(1, 0.0);
  for (Eigen::Index i = 0; i < nn; ++i) {
    const double x = n * (semicircle_cdf(es.eigenvalues()[i] / radius) - 0.5);
    if (x >= window.lo && x <= window.hi) out.add(Point(x));
  }
  return out;
}

}  // namespace ibm
