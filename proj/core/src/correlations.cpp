#include "ibm/pointfields/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "ibm/errors.hpp"

namespace ibm {

namespace {

double shell_volume(double lo, double hi, int dim) {
  return dim == 1 ? 2.0 * (hi - lo) : std::numbers::pi * (hi * hi - lo * lo);
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

CorrelationEstimate estimate_correlations(const std::vector<Configuration>& samples, const Window& window,
                                          const CorrelationOptions& opt) {
  if (samples.size() < 2) throw InsufficientData("estimate_correlations: need at least 2 samples");
  if (opt.bins < 1 || !(opt.r_max > 0.0)) throw InvalidParameter("estimate_correlations: bins >= 1 and r_max > 0 required");
  const int dim = window_dim(window);
  const double buffer = opt.buffer < 0.0 ? std::max(opt.r_max, 2.0) : opt.buffer;
  if (buffer < opt.r_max) throw InvalidParameter("estimate_correlations: buffer must be at least r_max");

  CorrelationEstimate est;
  est.inner = shrink(window, buffer);
  est.n_samples = samples.size();
  const double vin = window_volume(est.inner);
  const auto nb = static_cast<std::size_t>(opt.bins);
  const double h = opt.r_max / opt.bins;
  for (std::size_t k = 0; k < nb; ++k) {
    est.r_lo.push_back(h * static_cast<double>(k));
    est.r_hi.push_back(h * static_cast<double>(k + 1));
  }

  const std::size_t n = samples.size();
  std::vector<double> counts(n);
  std::vector<std::vector<double>> pairs(nb, std::vector<double>(n, 0.0));
  for (std::size_t s = 0; s < n; ++s) {
    const auto& c = samples[s];
    if (c.dim() != dim) throw InvalidParameter("estimate_correlations: sample dimension mismatch");
    std::vector<Point> all;
    std::vector<std::uint8_t> in_inner;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const Point& p = c.point(i);
      if (!window_contains(window, p)) continue;
      all.push_back(p);
      in_inner.push_back(window_contains(est.inner, p) ? 1 : 0);
    }
    counts[s] = static_cast<double>(std::count(in_inner.begin(), in_inner.end(), std::uint8_t{1}));
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (!in_inner[i]) continue;
      for (std::size_t j = 0; j < all.size(); ++j) {
        if (j == i) continue;
        const auto k = static_cast<std::size_t>((all[i] - all[j]).norm() / h);
        if (k < nb) pairs[k][s] += 1.0;
      }
    }
  }

  double nbar = 0.0;
  for (double v : counts) nbar += v;
  nbar /= static_cast<double>(n);
  est.intensity = nbar / vin;
  est.intensity_se = sample_sd(counts) / (std::sqrt(static_cast<double>(n)) * vin);

  for (std::size_t k = 0; k < nb; ++k) {
    const double c = shell_volume(est.r_lo[k], est.r_hi[k], dim) / vin;
    double pbar = 0.0;
    for (double v : pairs[k]) pbar += v;
    pbar /= static_cast<double>(n);
    if (!(nbar > 0.0)) {
      est.g.push_back(std::numeric_limits<double>::quiet_NaN());
      est.g_se.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double g = pbar / (c * nbar * nbar);
    std::vector<double> infl(n);
    for (std::size_t s = 0; s < n; ++s) {
      infl[s] = (pairs[k][s] - pbar) / (c * nbar * nbar) - 2.0 * g * (counts[s] - nbar) / nbar;
    }
    est.g.push_back(g);
    est.g_se.push_back(sample_sd(infl) / std::sqrt(static_cast<double>(n)));
  }
  return est;
}

IntensityProfile intensity_profile(const std::vector<Configuration>& samples, const std::vector<double>& edges) {
  if (samples.size() < 2) throw InsufficientData("intensity_profile: need at least 2 samples");
  if (edges.size() < 2) throw InvalidParameter("intensity_profile: need at least one shell");
  IntensityProfile prof;
  prof.edges = edges;
  const std::size_t nb = edges.size() - 1;
  const std::size_t n = samples.size();
  for (std::size_t k = 0; k < nb; ++k) {
    std::vector<double> v(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
      for (const auto& p : samples[s].points()) {
        const double r = p.norm();
        if (r >= edges[k] && r < edges[k + 1]) v[s] += 1.0;
      }
    }
    const double vol = shell_volume(edges[k], edges[k + 1], samples.front().dim());
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(n);
    prof.value.push_back(m / vol);
    prof.se.push_back(sample_sd(v) / (std::sqrt(static_cast<double>(n)) * vol));
  }
  return prof;
}

}  // namespace ibm
