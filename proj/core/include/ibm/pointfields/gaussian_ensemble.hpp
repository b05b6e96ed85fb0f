#pragma once

#include <cstdint>

#include "ibm/core/configuration.hpp"
#include "ibm/pointfields/window.hpp"

namespace ibm {

/// Bulk approximation of sine_beta, beta in {1, 2, 4}.
///
/// Draws the Hermite beta-ensemble of size n through the Dumitriu-Edelman
/// tridiagonal model, unfolds the spectrum with the semicircle distribution
/// function so the mean spacing is 1, and keeps the points in the window
/// (measured from the centre of the spectrum). Approximate in n.
/// n <= 0 chooses n from the window size.
Configuration sample_gaussian_ensemble_bulk(double beta, const Interval& window, int n, std::uint64_t seed);

/// n used when the caller passes n <= 0.
int default_ensemble_size(const Interval& window);

}  // namespace ibm
