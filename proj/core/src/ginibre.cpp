#include "ibm/pointfields/ginibre.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "ibm/errors.hpp"
#include "ibm/random/philox.hpp"

namespace ibm {

Configuration sample_ginibre(int n, double window_radius, std::uint64_t seed) {
  if (n < 1) throw InvalidParameter("Ginibre matrix size must be positive");
  if (!(window_radius > 0.0)) throw InvalidParameter("Ginibre window radius must be positive");
  if (std::isfinite(window_radius) && window_radius > 0.8 * std::sqrt(static_cast<double>(n))) {
    throw InvalidParameter("Ginibre window radius exceeds 0.8 sqrt(n); outside the bulk");
  }
  Rng rng(seed, 0);
  const auto nn = static_cast<std::size_t>(n);
  std::vector<std::complex<double>> a(nn * nn);
  const double s = std::sqrt(0.5);
  for (auto& z : a) {
    const double re = s * rng.normal();
    const double im = s * rng.normal();
    z = {re, im};
  }
  std::vector<std::complex<double>> w(nn);
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(),
                                        nullptr, 1, nullptr, 1);
  if (info != 0) {
    throw NumericError("Ginibre eigensolver failed (info=" + std::to_string(info) +
                       "); replay with n=" + std::to_string(n) + " seed=" + std::to_string(seed));
  }
  Configuration out(2, std::isfinite(window_radius) ? window_radius : 0.0);
  for (const auto& z : w) {
    const Point p(z.real(), z.imag());
    if (p.norm() <= window_radius) out.add(p);
  }
  return out;
}

}  // namespace ibm
