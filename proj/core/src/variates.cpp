#include "ibm/random/variates.hpp"

#include <cmath>

#include "ibm/errors.hpp"

namespace ibm {

double gamma_variate(Rng& rng, double shape) {
  if (!(shape > 0.0)) throw InvalidParameter("gamma shape must be positive");
  if (shape < 1.0) {
    const double u = rng.uniform();
    return gamma_variate(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double chi_variate(Rng& rng, double dof) {
  return std::sqrt(2.0 * gamma_variate(rng, 0.5 * dof));
}

std::int64_t poisson_variate(Rng& rng, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw InvalidParameter("Poisson mean must be finite and nonnegative");
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    const double u = rng.uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::int64_t k = 0;
    while (u > cdf && p > 0.0) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::int64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::int64_t>(k);
    }
  }
}

std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  if (n == 0) throw InvalidParameter("uniform_index: empty range");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  for (;;) {
    const std::uint64_t x = rng.next_u64();
    if (x < limit) return x % n;
  }
}

}  // namespace ibm
