#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ibm/core/point.hpp"

namespace ibm {

/// Cell list over a fixed snapshot of positions.
///
/// In d = 1 the positions are kept sorted and a query is a binary search;
/// in d = 2 they are bucketed on a square grid with the given cell size.
class NeighborIndex {
 public:
  NeighborIndex() = default;
  NeighborIndex(std::span<const Point> positions, double cell);

  /// Calls f(j) for every j with |pos[j] - x| < radius (possibly more in d = 2
  /// if radius exceeds the cell size; callers still test the distance).
  template <class F>
  void for_each_near(const Point& x, double radius, F&& f) const {
    if (dim_ == 1) {
      const auto [b, e] = range_1d(x[0], radius);
      for (std::size_t k = b; k < e; ++k) f(order_[k]);
      return;
    }
    const int reach = static_cast<int>(std::ceil(radius / cell_));
    const int cx = cell_coord(x[0], x0_);
    const int cy = cell_coord(x[1], y0_);
    for (int gx = std::max(0, cx - reach); gx <= std::min(nx_ - 1, cx + reach); ++gx) {
      for (int gy = std::max(0, cy - reach); gy <= std::min(ny_ - 1, cy + reach); ++gy) {
        const auto c = static_cast<std::size_t>(gx) * static_cast<std::size_t>(ny_) + static_cast<std::size_t>(gy);
        for (std::size_t k = start_[c]; k < start_[c + 1]; ++k) f(order_[k]);
      }
    }
  }

  std::size_t size() const { return n_; }

 private:
  std::pair<std::size_t, std::size_t> range_1d(double x, double radius) const;
  int cell_coord(double v, double origin) const;

  int dim_ = 1;
  std::size_t n_ = 0;
  double cell_ = 1.0;
  double x0_ = 0.0, y0_ = 0.0;
  int nx_ = 0, ny_ = 0;
  std::vector<double> keys_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> start_;
};

}  // namespace ibm
