#pragma once

#include <variant>

#include "ibm/core/configuration.hpp"
#include "ibm/random/philox.hpp"

namespace ibm {

/// [lo, hi] in d = 1.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Closed ball of the given radius around the origin.
struct Ball {
  double radius = 1.0;
  int dim = 1;
};

using Window = std::variant<Interval, Ball>;

int window_dim(const Window& w);
double window_volume(const Window& w);
bool window_contains(const Window& w, const Point& x);
/// Largest radius R with x + B(R) inside the window (negative outside).
double distance_to_boundary(const Window& w, const Point& x);
/// The window shrunk by `buffer` on every side. Throws InvalidParameter if it vanishes.
Window shrink(const Window& w, double buffer);
/// Radius of the smallest origin-centred ball containing the window.
double enclosing_radius(const Window& w);
Point uniform_in_window(const Window& w, Rng& rng);

/// Volume of the ball of radius r in dimension d.
double ball_volume(double r, int dim);

/// Homogeneous Poisson process with the given intensity on the window.
Configuration sample_poisson(double intensity, const Window& w, std::uint64_t seed);

}  // namespace ibm
