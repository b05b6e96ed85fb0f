#pragma once

#include <cstdint>
#include <limits>

#include "ibm/core/configuration.hpp"

namespace ibm {

/// Eigenvalues of an n x n matrix with i.i.d. standard complex Gaussian
/// entries (E|z|^2 = 1), restricted to |z| <= window_radius.
///
/// Requires window_radius <= 0.8 sqrt(n) so the window stays in the bulk;
/// pass infinity for all n eigenvalues.
Configuration sample_ginibre(int n, double window_radius, std::uint64_t seed);

}  // namespace ibm
