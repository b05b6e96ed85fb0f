#include "ibm/core/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "ibm/errors.hpp"

namespace ibm {

double smoothstep3(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * (3.0 - 2.0 * u);
}

double smoothstep5(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * u * (u * (6.0 * u - 15.0) + 10.0);
}

double chi(double t, double modulus) {
  if (!(t > 1.0)) throw InvalidParameter("chi: t must exceed 1, got " + std::to_string(t));
  return smoothstep3(t - modulus);
}

double chi(double t, const Point& x) { return chi(t, x.norm()); }

double upsilon(double p, double modulus) {
  if (!(p > 0.0)) throw InvalidParameter("upsilon: p must be positive, got " + std::to_string(p));
  return smoothstep3(p * modulus - 1.0);
}

double upsilon(double p, const Point& x) { return upsilon(p, x.norm()); }

double theta(double t) { return 1.0 - smoothstep5(t); }

double theta_prime(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double v = t * (1.0 - t);
  return -30.0 * v * v;
}

ShellBounds::ShellBounds(std::vector<std::int64_t> values) : values_(std::move(values)) {
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] <= values_[i - 1]) throw InvalidParameter("shell bounds must be strictly increasing");
  }
  if (!values_.empty() && values_.front() < 0) throw InvalidParameter("shell bounds must be nonnegative");
}

std::int64_t ShellBounds::operator()(int k) const {
  if (values_.empty()) throw InvalidParameter("shell bounds are empty");
  if (k < 1) throw InvalidParameter("shell index starts at 1");
  const auto n = static_cast<int>(values_.size());
  if (k <= n) return values_[static_cast<std::size_t>(k - 1)];
  const std::int64_t step = n >= 2 ? values_[static_cast<std::size_t>(n - 1)] - values_[static_cast<std::size_t>(n - 2)] : 1;
  return values_.back() + step * static_cast<std::int64_t>(k - n);
}

ShellBounds ShellBounds::plus() const {
  std::vector<std::int64_t> v(values_.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = 1 + (*this)(static_cast<int>(k) + 2);
  return ShellBounds(std::move(v));
}

ShellBounds ShellBounds::for_level(int level, double intensity, int dim, int kmax) {
  if (!(intensity >= 0.0)) throw InvalidParameter("for_level: intensity must be nonnegative");
  if (kmax < 2) throw InvalidParameter("for_level: kmax must be at least 2");
  std::vector<std::int64_t> v;
  v.reserve(static_cast<std::size_t>(kmax));
  for (int k = 1; k <= kmax; ++k) {
    const double vol = dim == 1 ? 2.0 * k : std::numbers::pi * k * k;
    v.push_back(static_cast<std::int64_t>(std::ceil(2.0 * intensity * vol)) + k + level);
  }
  return ShellBounds(std::move(v));
}

bool ShellBounds::strictly_below(const ShellBounds& b, int kmax) const {
  for (int k = 1; k <= kmax; ++k) {
    if (!((*this)(k) < b(k))) return false;
  }
  return true;
}

void CutoffParams::validate() const {
  if (!(r > 1.0)) throw InvalidParameter("cutoff r must exceed 1");
  if (!(s > 1.0)) throw InvalidParameter("cutoff s must exceed 1");
  if (!(p > 0.0)) throw InvalidParameter("cutoff p must be positive");
  if (!(r < s)) throw InvalidParameter("cutoff requires r < s");
  if (a.empty()) throw InvalidParameter("cutoff shell bounds are empty");
  if (!std::isfinite(rho_s)) throw InvalidParameter("rho_s must be finite");
}

namespace {

std::vector<double> sorted_moduli(const Configuration& config) {
  std::vector<double> m(config.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = config.point(i).norm();
  std::sort(m.begin(), m.end());
  return m;
}

// Walks the (k, i) pairs with i in J_k, i.e. label i > a(k) and |l_i| <= k.
// Labels are 1-based, so index a(k) is the first eligible one.
template <class F>
void for_each_excess(const ShellBounds& a, const std::vector<double>& m, F&& f) {
  const auto n = static_cast<std::int64_t>(m.size());
  for (int k = 1;; ++k) {
    const std::int64_t ak = a(k);
    if (ak >= n) break;
    for (std::int64_t i = ak; i < n && m[static_cast<std::size_t>(i)] <= k; ++i) {
      f(k, static_cast<std::size_t>(i));
    }
  }
}

}  // namespace

bool in_compact(const ShellBounds& a, const Configuration& config) {
  const auto m = sorted_moduli(config);
  bool inside = true;
  for_each_excess(a, m, [&](int, std::size_t) { inside = false; });
  return inside;
}

double distance_to_compact(const ShellBounds& a, const Configuration& config) {
  const auto m = sorted_moduli(config);
  double sum = 0.0;
  for_each_excess(a, m, [&](int k, std::size_t i) {
    const double gap = k - m[i];
    sum += gap * gap;
  });
  return std::sqrt(sum);
}

double distance_to_compact_sorted(const ShellBounds& a, std::span<const double> sorted, std::size_t skip) {
  const bool drop = skip < sorted.size();
  const auto n = static_cast<std::int64_t>(sorted.size()) - (drop ? 1 : 0);
  auto at = [&](std::int64_t i) {
    const auto u = static_cast<std::size_t>(i);
    return sorted[drop && u >= skip ? u + 1 : u];
  };
  double sum = 0.0;
  for (int k = 1;; ++k) {
    const std::int64_t ak = a(k);
    if (ak >= n) break;
    for (std::int64_t i = ak; i < n && at(i) <= k; ++i) {
      const double gap = k - at(i);
      sum += gap * gap;
    }
  }
  return std::sqrt(sum);
}

double varpi(const ShellBounds& a, const Configuration& config) {
  return theta(distance_to_compact(a, config));
}

std::vector<Point> varpi_gradient(const ShellBounds& a, const Configuration& config) {
  const std::size_t n = config.size();
  std::vector<Point> grad(n, Point::zero(config.dim()));
  if (n == 0) return grad;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return config.point(i).norm() < config.point(j).norm();
  });
  std::vector<double> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = config.point(order[i]).norm();

  // d(d^2)/d|x_i| = -2 sum_k (k - |x_i|) over shells with i in J_k.
  std::vector<double> dsq_dmod(n, 0.0);
  double dsq = 0.0;
  for_each_excess(a, m, [&](int k, std::size_t i) {
    const double gap = k - m[i];
    dsq += gap * gap;
    dsq_dmod[i] -= 2.0 * gap;
  });
  const double d = std::sqrt(dsq);
  const double tp = theta_prime(d);
  if (tp == 0.0) return grad;
  for (std::size_t i = 0; i < n; ++i) {
    if (dsq_dmod[i] == 0.0 || m[i] == 0.0) continue;
    const Point& x = config.point(order[i]);
    grad[order[i]] = x * (tp * dsq_dmod[i] / (2.0 * d * m[i]));
  }
  return grad;
}

}  // namespace ibm
