#pragma once

#include <cstdint>

#include "ibm/random/philox.hpp"

namespace ibm {

// Distribution algorithms are fixed here rather than taken from <random>,
// whose algorithms differ between standard libraries.

/// Gamma(shape, 1) by Marsaglia-Tsang; shape > 0.
double gamma_variate(Rng& rng, double shape);

/// Chi variate with `dof` degrees of freedom, dof > 0.
double chi_variate(Rng& rng, double dof);

/// Poisson(mean): inversion for mean < 10, PTRS (Hormann 1993) otherwise.
std::int64_t poisson_variate(Rng& rng, double mean);

/// Bernoulli(p).
inline bool bernoulli(Rng& rng, double p) { return rng.uniform() < p; }

/// Uniform integer in [0, n).
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

}  // namespace ibm
