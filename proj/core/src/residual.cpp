#include "ibm/drift/residual.hpp"

#include <cmath>
#include <tuple>

#include "ibm/errors.hpp"
#include "ibm/util/parallel.hpp"

namespace ibm {

namespace {

std::pair<double, double> mean_se(const std::vector<double>& v) {
  const auto n = static_cast<double>(v.size());
  double m = 0.0;
  for (double x : v) m += x;
  m /= n;
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  const double sd = v.size() > 1 ? std::sqrt(s / (n - 1.0)) : 0.0;
  return {m, sd / std::sqrt(n)};
}

}  // namespace

ResidualEstimate drift_residual(const ModelSpec& model, const CutoffParams& params, const CutoffParams& big,
                                const std::vector<Configuration>& samples, double k, GinibreVariant variant) {
  if (samples.size() < 2) throw InsufficientData("drift_residual: need at least 2 samples");
  if (!(k > 0.0)) throw InvalidParameter("drift_residual: analysis radius must be positive");
  DriftSpec sa;
  sa.mode = DriftMode::kCutoff;
  sa.cutoff = params;
  sa.variant = variant;
  DriftSpec sb = sa;
  sb.cutoff = big;
  const DriftField fa(model, sa);
  const DriftField fb(model, sb);

  ResidualEstimate out;
  out.per_sample.assign(samples.size(), 0.0);
  parallel_for(samples.size(), [&](std::size_t s) {
    const auto& pts = samples[s].points();
    const auto snap_a = fa.prepare(pts);
    const auto snap_b = fb.prepare(pts);
    double acc = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].norm() > k) continue;
      acc += (fa.at(snap_a, i) - fb.at(snap_b, i)).norm();
    }
    out.per_sample[s] = acc;
  });
  std::tie(out.value, out.se) = mean_se(out.per_sample);
  return out;
}

ResidualEstimate ginibre_variant_gap(const std::vector<Configuration>& samples, double r, double center) {
  if (samples.size() < 2) throw InsufficientData("ginibre_variant_gap: need at least 2 samples");
  if (!(r > 0.0) || !(center > 0.0)) throw InvalidParameter("ginibre_variant_gap: r and center must be positive");
  ResidualEstimate out;
  out.per_sample.assign(samples.size(), 0.0);
  parallel_for(samples.size(), [&](std::size_t s) {
    const auto& c = samples[s];
    if (c.dim() != 2) throw InvalidParameter("ginibre_variant_gap: samples must be planar");
    double acc = 0.0;
    int cnt = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const Point& x = c.point(i);
      if (x.norm() >= center) continue;
      const Configuration rest = c.without(i);
      acc += (drift_ginibre(x, rest, r, GinibreVariant::kShifted) - drift_ginibre(x, rest, r, GinibreVariant::kConfined))
                 .norm();
      ++cnt;
    }
    out.per_sample[s] = cnt > 0 ? acc / cnt : 0.0;
  });
  std::tie(out.value, out.se) = mean_se(out.per_sample);
  return out;
}

std::pair<double, double> paired_difference(const ResidualEstimate& a, const ResidualEstimate& b) {
  if (a.per_sample.size() != b.per_sample.size() || a.per_sample.size() < 2) {
    throw InsufficientData("paired_difference: ladders must share at least 2 samples");
  }
  std::vector<double> d(a.per_sample.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.per_sample[i] - b.per_sample[i];
  return mean_se(d);
}

}  // namespace ibm
