#include "ibm/drift/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ibm/errors.hpp"

namespace ibm {

NeighborIndex::NeighborIndex(std::span<const Point> positions, double cell) : n_(positions.size()) {
  if (!(cell > 0.0)) throw InvalidParameter("neighbor index: cell size must be positive");
  cell_ = cell;
  if (positions.empty()) return;
  dim_ = positions.front().dim();
  order_.resize(n_);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (dim_ == 1) {
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return positions[a][0] < positions[b][0]; });
    keys_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) keys_[k] = positions[order_[k]][0];
    return;
  }
  double x1 = positions[0][0], y1 = positions[0][1];
  x0_ = x1;
  y0_ = y1;
  for (const auto& p : positions) {
    x0_ = std::min(x0_, p[0]);
    y0_ = std::min(y0_, p[1]);
    x1 = std::max(x1, p[0]);
    y1 = std::max(y1, p[1]);
  }
  // Cap the grid so a sparse, wide snapshot does not allocate huge tables.
  const double span = std::max(x1 - x0_, y1 - y0_);
  cell_ = std::max(cell_, span / 2048.0);
  nx_ = static_cast<int>((x1 - x0_) / cell_) + 1;
  ny_ = static_cast<int>((y1 - y0_) / cell_) + 1;
  const auto ncell = static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
  std::vector<std::size_t> cell_of(n_);
  start_.assign(ncell + 1, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    const auto c = static_cast<std::size_t>(cell_coord(positions[i][0], x0_)) * static_cast<std::size_t>(ny_) +
                   static_cast<std::size_t>(cell_coord(positions[i][1], y0_));
    cell_of[i] = c;
    ++start_[c + 1];
  }
  for (std::size_t c = 0; c < ncell; ++c) start_[c + 1] += start_[c];
  std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t i = 0; i < n_; ++i) order_[fill[cell_of[i]]++] = i;
}

std::pair<std::size_t, std::size_t> NeighborIndex::range_1d(double x, double radius) const {
  const auto b = std::lower_bound(keys_.begin(), keys_.end(), x - radius);
  const auto e = std::upper_bound(b, keys_.end(), x + radius);
  return {static_cast<std::size_t>(b - keys_.begin()), static_cast<std::size_t>(e - keys_.begin())};
}

int NeighborIndex::cell_coord(double v, double origin) const {
  return static_cast<int>(std::floor((v - origin) / cell_));
}

}  // namespace ibm
