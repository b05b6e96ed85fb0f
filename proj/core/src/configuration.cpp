#include "ibm/core/configuration.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <tuple>

#include "ibm/errors.hpp"

namespace ibm {

Point Point::checked(std::span<const double> coords) {
  if (coords.size() == 1) {
    Point p(coords[0]);
    if (!p.is_finite()) throw InvalidParameter("point has a non-finite coordinate");
    return p;
  }
  if (coords.size() == 2) {
    Point p(coords[0], coords[1]);
    if (!p.is_finite()) throw InvalidParameter("point has a non-finite coordinate");
    return p;
  }
  throw InvalidParameter("points must have dimension 1 or 2, got " + std::to_string(coords.size()));
}

Configuration::Configuration(int dim, double window_radius)
    : dim_(dim), window_radius_(window_radius) {
  if (dim != 1 && dim != 2) throw InvalidParameter("configuration dimension must be 1 or 2");
  if (!(window_radius >= 0.0)) throw InvalidParameter("window radius must be nonnegative");
}

void Configuration::add(const Point& p, bool frozen) {
  if (p.dim() != dim_) throw InvalidParameter("point dimension does not match configuration");
  if (!p.is_finite()) throw InvalidParameter("point has a non-finite coordinate");
  if (!frozen && window_radius_ > 0.0 && p.norm() > window_radius_) {
    throw InvalidParameter("non-frozen point lies outside the window");
  }
  points_.push_back(p);
  frozen_.push_back(frozen ? 1 : 0);
}

std::size_t Configuration::frozen_count() const {
  return static_cast<std::size_t>(std::count(frozen_.begin(), frozen_.end(), std::uint8_t{1}));
}

Configuration Configuration::without(std::size_t i) const {
  Configuration out(dim_, window_radius_);
  out.points_.reserve(points_.size());
  for (std::size_t j = 0; j < points_.size(); ++j) {
    if (j == i) continue;
    out.points_.push_back(points_[j]);
    out.frozen_.push_back(frozen_[j]);
  }
  return out;
}

namespace {

bool label_order(const Point& a, const Point& b) {
  const double na = a.norm2();
  const double nb = b.norm2();
  if (na != nb) return na < nb;
  return lex_less(a, b);
}

}  // namespace

LabeledConfig label(const Configuration& config) {
  std::vector<std::size_t> order(config.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return label_order(config.point(i), config.point(j));
  });
  LabeledConfig out;
  out.dim = config.dim();
  out.window_radius = config.window_radius();
  out.particles.reserve(order.size());
  std::int64_t next = 1;
  for (std::size_t idx : order) {
    out.particles.push_back(Particle{next++, config.point(idx), config.frozen(idx), 0.0});
  }
  return out;
}

Configuration unlabel(const LabeledConfig& labeled) {
  Configuration out(labeled.dim, 0.0);
  for (const auto& p : labeled.particles) out.add(p.position, p.frozen);
  if (labeled.window_radius > 0.0) {
    Configuration windowed(labeled.dim, labeled.window_radius);
    for (const auto& p : labeled.particles) windowed.add(p.position, p.frozen);
    return windowed;
  }
  return out;
}

Configuration restrict(const Configuration& config, double radius, bool complement) {
  if (!(radius > 0.0)) throw InvalidParameter("restrict: radius must be positive");
  const double window = complement ? config.window_radius()
                                   : (config.window_radius() > 0.0
                                          ? std::min(config.window_radius(), radius)
                                          : radius);
  Configuration out(config.dim(), window);
  for (std::size_t i = 0; i < config.size(); ++i) {
    const bool inside = config.point(i).norm() <= radius;
    if (inside != complement) out.add(config.point(i), config.frozen(i));
  }
  return out;
}

bool same_multiset(const Configuration& a, const Configuration& b) {
  if (a.dim() != b.dim() || a.size() != b.size()) return false;
  auto key = [](const Configuration& c) {
    std::vector<std::tuple<double, double, bool>> v;
    v.reserve(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      v.emplace_back(c.point(i)[0], c.point(i)[1], c.frozen(i));
    }
    std::sort(v.begin(), v.end());
    return v;
  };
  return key(a) == key(b);
}

void write_configuration_csv(std::ostream& os, const Configuration& config) {
  os << "label,frozen,x1";
  if (config.dim() == 2) os << ",x2";
  os << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < config.size(); ++i) {
    os << (i + 1) << ',' << (config.frozen(i) ? 1 : 0) << ',' << config.point(i)[0];
    if (config.dim() == 2) os << ',' << config.point(i)[1];
    os << '\n';
  }
}

void write_configuration_csv(const std::filesystem::path& path, const Configuration& config) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
  write_configuration_csv(os, config);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

Configuration read_configuration_csv(std::istream& is, double window_radius) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("configuration CSV: missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv(line);
  int dim = 0;
  if (header == std::vector<std::string>{"label", "frozen", "x1"}) {
    dim = 1;
  } else if (header == std::vector<std::string>{"label", "frozen", "x1", "x2"}) {
    dim = 2;
  } else {
    throw ConfigError("configuration CSV: header must be label,frozen,x1[,x2]");
  }
  std::vector<std::pair<std::int64_t, std::pair<Point, bool>>> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != static_cast<std::size_t>(2 + dim)) {
      throw ConfigError("configuration CSV: wrong column count on line " + std::to_string(lineno));
    }
    try {
      const std::int64_t lab = std::stoll(cells[0]);
      const bool frozen = std::stoi(cells[1]) != 0;
      std::array<double, 2> c{0.0, 0.0};
      for (int k = 0; k < dim; ++k) c[static_cast<std::size_t>(k)] = std::stod(cells[2 + static_cast<std::size_t>(k)]);
      rows.push_back({lab, {Point::checked(std::span<const double>(c.data(), static_cast<std::size_t>(dim))), frozen}});
    } catch (const std::logic_error&) {
      throw ConfigError("configuration CSV: malformed number on line " + std::to_string(lineno));
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  Configuration out(dim, window_radius);
  for (const auto& [lab, pf] : rows) out.add(pf.first, pf.second);
  return out;
}

Configuration read_configuration_csv(const std::filesystem::path& path, double window_radius) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path.string());
  return read_configuration_csv(is, window_radius);
}

}  // namespace ibm
