#include "ibm/pointfields/window.hpp"

#include <cmath>
#include <numbers>

#include "ibm/errors.hpp"
#include "ibm/random/variates.hpp"

namespace ibm {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace

double ball_volume(double r, int dim) { return dim == 1 ? 2.0 * r : std::numbers::pi * r * r; }

int window_dim(const Window& w) {
  return std::visit(overloaded{[](const Interval&) { return 1; }, [](const Ball& b) { return b.dim; }}, w);
}

double window_volume(const Window& w) {
  return std::visit(overloaded{[](const Interval& i) { return i.hi - i.lo; },
                               [](const Ball& b) { return ball_volume(b.radius, b.dim); }},
                    w);
}

bool window_contains(const Window& w, const Point& x) {
  return std::visit(overloaded{[&](const Interval& i) { return x[0] >= i.lo && x[0] <= i.hi; },
                               [&](const Ball& b) { return x.norm() <= b.radius; }},
                    w);
}

double distance_to_boundary(const Window& w, const Point& x) {
  return std::visit(overloaded{[&](const Interval& i) { return std::min(x[0] - i.lo, i.hi - x[0]); },
                               [&](const Ball& b) { return b.radius - x.norm(); }},
                    w);
}

Window shrink(const Window& w, double buffer) {
  return std::visit(overloaded{[&](const Interval& i) -> Window {
                                 if (!(i.hi - i.lo > 2.0 * buffer)) throw InvalidParameter("window too small for the edge buffer");
                                 return Interval{i.lo + buffer, i.hi - buffer};
                               },
                               [&](const Ball& b) -> Window {
                                 if (!(b.radius > buffer)) throw InvalidParameter("window too small for the edge buffer");
                                 return Ball{b.radius - buffer, b.dim};
                               }},
                    w);
}

double enclosing_radius(const Window& w) {
  return std::visit(overloaded{[](const Interval& i) { return std::max(std::fabs(i.lo), std::fabs(i.hi)); },
                               [](const Ball& b) { return b.radius; }},
                    w);
}

Point uniform_in_window(const Window& w, Rng& rng) {
  return std::visit(overloaded{[&](const Interval& i) { return Point(rng.uniform(i.lo, i.hi)); },
                               [&](const Ball& b) {
                                 if (b.dim == 1) return Point(rng.uniform(-b.radius, b.radius));
                                 const double rad = b.radius * std::sqrt(rng.uniform());
                                 const double ang = 2.0 * std::numbers::pi * rng.uniform();
                                 return Point(rad * std::cos(ang), rad * std::sin(ang));
                               }},
                    w);
}

Configuration sample_poisson(double intensity, const Window& w, std::uint64_t seed) {
  if (!(intensity >= 0.0)) throw InvalidParameter("Poisson intensity must be nonnegative");
  Rng rng(seed, 0);
  const auto n = poisson_variate(rng, intensity * window_volume(w));
  Configuration c(window_dim(w), 0.0);
  for (std::int64_t i = 0; i < n; ++i) c.add(uniform_in_window(w, rng));
  return c;
}

}  // namespace ibm
