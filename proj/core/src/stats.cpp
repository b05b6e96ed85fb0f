#include "ibm/diagnostics/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ibm/errors.hpp"
#include "ibm/random/philox.hpp"
#include "ibm/random/variates.hpp"

namespace ibm {

MeanSe mean_se(std::span<const double> v) {
  MeanSe out;
  out.n = v.size();
  if (v.empty()) return out;
  const auto n = static_cast<double>(v.size());
  double m = 0.0;
  for (double x : v) m += x;
  m /= n;
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  out.mean = m;
  out.se = v.size() > 1 ? std::sqrt(s / (n - 1.0) / n) : 0.0;
  return out;
}

double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  // Small lambda: the theta-function form converges fast.
  if (lambda < 1.18) {
    const double y = std::exp(-M_PI * M_PI / (8.0 * lambda * lambda));
    double s = 0.0;
    for (int k = 1; k <= 9; k += 2) s += std::pow(y, k * k);
    return 1.0 - std::sqrt(2.0 * M_PI) / lambda * s;
  }
  double s = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += sign * term;
    if (term < 1e-17) break;
    sign = -sign;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

namespace {

double ks_p(double d, double ne) {
  const double sn = std::sqrt(ne);
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

}  // namespace

KsResult ks_one_sample(std::vector<double> data, const std::function<double(double)>& cdf) {
  if (data.empty()) throw InsufficientData("ks_one_sample: empty sample");
  std::sort(data.begin(), data.end());
  const auto n = static_cast<double>(data.size());
  double d = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double f = cdf(data[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, ks_p(d, n)};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InsufficientData("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, ks_p(d, na * nb / (na + nb))};
}

double wasserstein1(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InsufficientData("wasserstein1: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  // Integrate |F_a^{-1}(u) - F_b^{-1}(u)| over the merged breakpoints k/na, l/nb.
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double u = 0.0, w = 0.0;
  while (i < a.size() && j < b.size()) {
    const double ua = static_cast<double>(i + 1) / na;
    const double ub = static_cast<double>(j + 1) / nb;
    const double next = std::min(ua, ub);
    w += (next - u) * std::fabs(a[i] - b[j]);
    u = next;
    if (ua <= next) ++i;
    if (ub <= next) ++j;
  }
  return w;
}

std::vector<std::size_t> hungarian(const std::vector<double>& cost, std::size_t n) {
  if (cost.size() != n * n) throw InvalidParameter("hungarian: cost matrix must be n x n");
  // Jonker-Volgenant style potentials, 1-based with a virtual column 0.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assign(n);
  for (std::size_t j = 1; j <= n; ++j) assign[p[j] - 1] = j - 1;
  return assign;
}

double wasserstein1(const std::vector<Point>& a, const std::vector<Point>& b) {
  if (a.empty() || a.size() != b.size()) {
    throw InsufficientData("wasserstein1: point samples must be nonempty and of equal size");
  }
  if (a.front().dim() == 1) {
    std::vector<double> xa, xb;
    for (const auto& p : a) xa.push_back(p[0]);
    for (const auto& p : b) xb.push_back(p[0]);
    return wasserstein1(std::move(xa), std::move(xb));
  }
  const std::size_t n = a.size();
  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = distance(a[i], b[j]);
  }
  const auto match = hungarian(cost, n);
  double w = 0.0;
  for (std::size_t i = 0; i < n; ++i) w += cost[i * n + match[i]];
  return w / static_cast<double>(n);
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y, std::span<const double> sigma) {
  const std::size_t n = x.size();
  if (n != y.size() || (!sigma.empty() && sigma.size() != n)) throw InvalidParameter("linear_fit: size mismatch");
  if (n < 2 || (sigma.empty() && n < 3)) throw InsufficientData("linear_fit: too few points");
  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = sigma.empty() ? 1.0 : 1.0 / (sigma[i] * sigma[i]);
    sw += w;
    sx += w * x[i];
    sy += w * y[i];
    sxx += w * x[i] * x[i];
    sxy += w * x[i] * y[i];
  }
  const double det = sw * sxx - sx * sx;
  if (!(det > 0.0)) throw NumericError("linear_fit: degenerate abscissae");
  LinearFit f;
  f.slope = (sw * sxy - sx * sy) / det;
  f.intercept = (sxx * sy - sx * sxy) / det;
  double scale = 1.0;
  if (sigma.empty()) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      rss += r * r;
    }
    scale = rss / static_cast<double>(n - 2);
  }
  f.se_intercept = std::sqrt(scale * sxx / det);
  f.se_slope = std::sqrt(scale * sw / det);
  f.cov = -scale * sx / det;
  return f;
}

double bootstrap_se(std::size_t n, const std::function<double(const std::vector<std::size_t>&)>& stat, int reps,
                    std::uint64_t seed) {
  if (n == 0 || reps < 2) throw InsufficientData("bootstrap_se: need data and at least 2 resamples");
  Rng rng(seed, 0x626f6f74ULL);
  std::vector<double> vals(static_cast<std::size_t>(reps));
  std::vector<std::size_t> idx(n);
  for (auto& v : vals) {
    for (auto& i : idx) i = static_cast<std::size_t>(uniform_index(rng, n));
    v = stat(idx);
  }
  const MeanSe m = mean_se(vals);
  return m.se * std::sqrt(static_cast<double>(reps));
}

double normal_upper(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace ibm
