#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "ibm/core/point.hpp"

namespace ibm {

/// A finite window of a configuration together with its frozen exterior.
///
/// Points are stored in insertion order. Non-frozen points must lie in the
/// closed ball of radius `window_radius()` whenever that radius is positive;
/// a radius of 0 means the window is unbounded.
class Configuration {
 public:
  explicit Configuration(int dim = 1, double window_radius = 0.0);

  /// Appends a point. Throws InvalidParameter on dimension mismatch,
  /// non-finite coordinates, or a non-frozen point outside the window.
  void add(const Point& p, bool frozen = false);

  int dim() const { return dim_; }
  double window_radius() const { return window_radius_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  const std::vector<Point>& points() const { return points_; }
  const Point& point(std::size_t i) const { return points_[i]; }
  bool frozen(std::size_t i) const { return frozen_[i] != 0; }
  std::size_t frozen_count() const;

  /// Copy of the configuration with the i-th point removed.
  Configuration without(std::size_t i) const;

 private:
  int dim_;
  double window_radius_;
  std::vector<Point> points_;
  std::vector<std::uint8_t> frozen_;
};

struct Particle {
  std::int64_t label = 0;
  Point position;
  bool frozen = false;
  double local_time = 0.0;
};

/// Labeled particles; `label()` produces labels 1..n in order of increasing modulus.
struct LabeledConfig {
  int dim = 1;
  double window_radius = 0.0;
  std::vector<Particle> particles;

  std::size_t size() const { return particles.size(); }
};

/// Labels points by increasing |x|, ties broken lexicographically by coordinates.
LabeledConfig label(const Configuration& config);

/// Forgets labels; the inverse of `label` up to point order.
Configuration unlabel(const LabeledConfig& labeled);

/// Points with |x| <= radius, or |x| > radius when `complement` is set.
Configuration restrict(const Configuration& config, double radius, bool complement = false);

/// Multiset equality of (point, frozen) pairs.
bool same_multiset(const Configuration& a, const Configuration& b);

/// CSV with header `label,frozen,x1[,x2]`; rows in label order.
void write_configuration_csv(std::ostream& os, const Configuration& config);
void write_configuration_csv(const std::filesystem::path& path, const Configuration& config);
Configuration read_configuration_csv(std::istream& is, double window_radius = 0.0);
Configuration read_configuration_csv(const std::filesystem::path& path, double window_radius = 0.0);

}  // namespace ibm
