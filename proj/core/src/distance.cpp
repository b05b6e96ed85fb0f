#include "ibm/diagnostics/distance.hpp"

#include <algorithm>
#include <cmath>

#include "ibm/diagnostics/invariance.hpp"
#include "ibm/diagnostics/stats.hpp"
#include "ibm/errors.hpp"
#include "ibm/pointfields/correlations.hpp"
#include "ibm/random/philox.hpp"
#include "ibm/random/variates.hpp"

namespace ibm {

std::vector<std::optional<Point>> tagged_displacements(const std::vector<PathRecord>& paths, std::int64_t label,
                                                       double t) {
  std::vector<std::optional<Point>> out(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& p = paths[i];
    if (p.frames.empty()) continue;
    const Particle* a = p.frames.front().find(label);
    const Particle* b = p.frames[p.frame_at(t)].find(label);
    if (a != nullptr && b != nullptr) out[i] = b->position - a->position;
  }
  return out;
}

namespace {

void check_models(const std::vector<PathRecord>& a, const std::vector<PathRecord>& b) {
  if (a.empty() || b.empty()) throw InsufficientData("scheme_distance: empty replica set");
  for (const auto* set : {&a, &b}) {
    for (const auto& p : *set) {
      if (p.model_id != a.front().model_id) {
        throw ConfigError("scheme_distance: mismatched models (" + a.front().model_id + " vs " + p.model_id + ")");
      }
    }
  }
}

std::vector<Point> pick(const std::vector<std::optional<Point>>& d, const std::vector<std::size_t>& idx) {
  std::vector<Point> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) {
    if (d[i]) out.push_back(*d[i]);
  }
  return out;
}

double w1_points(const std::vector<Point>& a, const std::vector<Point>& b) {
  if (a.empty() || b.empty()) throw InsufficientData("scheme_distance: tagged particle absent in every replica");
  if (a.front().dim() == 1 || a.size() != b.size()) {
    if (a.front().dim() != 1) throw InsufficientData("scheme_distance: 2-d W1 needs equally many tagged particles");
    std::vector<double> xa, xb;
    for (const auto& p : a) xa.push_back(p[0]);
    for (const auto& p : b) xb.push_back(p[0]);
    return wasserstein1(std::move(xa), std::move(xb));
  }
  return wasserstein1(a, b);
}

std::vector<std::size_t> iota_n(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

std::vector<double> edges_for(const Window& w, int bins) {
  if (bins < 1) throw InvalidParameter("scheme_distance: profile_bins must be positive");
  const double r = enclosing_radius(w);
  std::vector<double> e(static_cast<std::size_t>(bins) + 1);
  for (int k = 0; k <= bins; ++k) e[static_cast<std::size_t>(k)] = r * k / bins;
  return e;
}

double max_dev(const IntensityProfile& a, const IntensityProfile& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.value.size(); ++k) m = std::max(m, std::fabs(a.value[k] - b.value[k]));
  return m;
}

std::vector<Configuration> pick_cfg(const std::vector<Configuration>& c, const std::vector<std::size_t>& idx) {
  std::vector<Configuration> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(c[i]);
  return out;
}

std::vector<std::size_t> resample(Rng& rng, std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = static_cast<std::size_t>(uniform_index(rng, n));
  return idx;
}

}  // namespace

SchemeDistance scheme_distance(const std::vector<PathRecord>& a, const std::vector<PathRecord>& b, const Window& window,
                               double t, const DistanceOptions& opt) {
  check_models(a, b);
  if (opt.bootstrap < 2) throw InvalidParameter("scheme_distance: need at least 2 bootstrap resamples");
  if (opt.paired && a.size() != b.size()) throw ConfigError("scheme_distance: paired sets need equal replica counts");
  const auto da = tagged_displacements(a, opt.label, t);
  const auto db = tagged_displacements(b, opt.label, t);
  const auto ca = samples_at(a, t);
  const auto cb = samples_at(b, t);
  const auto edges = edges_for(window, opt.profile_bins);

  SchemeDistance out;
  out.n_a = a.size();
  out.n_b = b.size();
  const auto ia = iota_n(a.size());
  const auto ib = iota_n(b.size());
  out.w1 = w1_points(pick(da, ia), pick(db, ib));
  out.intensity_dev = max_dev(intensity_profile(ca, edges), intensity_profile(cb, edges));

  Rng rng(opt.seed, 0x64697374ULL);
  std::vector<double> w(static_cast<std::size_t>(opt.bootstrap)), dv(w.size());
  for (std::size_t r = 0; r < w.size(); ++r) {
    const auto ra = resample(rng, a.size());
    const auto rb = opt.paired ? ra : resample(rng, b.size());
    w[r] = w1_points(pick(da, ra), pick(db, rb));
    dv[r] = max_dev(intensity_profile(pick_cfg(ca, ra), edges), intensity_profile(pick_cfg(cb, rb), edges));
  }
  const double k = std::sqrt(static_cast<double>(w.size()));
  out.w1_se = mean_se(w).se * k;
  out.intensity_dev_se = mean_se(dv).se * k;
  return out;
}

bool LadderResult::strictly_decreasing(double z_tol) const {
  for (std::size_t k = 0; k < diff.size(); ++k) {
    if (!(diff[k] > 0.0) || !(diff[k] > z_tol * diff_se[k])) return false;
  }
  return true;
}

LadderResult ladder_distance(const std::vector<std::vector<PathRecord>>& rungs, const std::vector<PathRecord>& reference,
                             const Window& window, double t, const DistanceOptions& opt) {
  if (rungs.empty()) throw InsufficientData("ladder_distance: no rungs");
  const std::size_t n = reference.size();
  for (const auto& r : rungs) {
    if (r.size() != n) throw ConfigError("ladder_distance: every rung needs as many replicas as the reference");
  }
  LadderResult out;
  std::vector<std::vector<std::optional<Point>>> disp;
  DistanceOptions popt = opt;
  popt.paired = true;
  for (const auto& r : rungs) {
    out.rungs.push_back(scheme_distance(r, reference, window, t, popt));
    disp.push_back(tagged_displacements(r, opt.label, t));
  }
  const auto dref = tagged_displacements(reference, opt.label, t);
  const std::size_t m = rungs.size();
  if (m < 2) return out;

  Rng rng(opt.seed, 0x6c616464ULL);
  std::vector<std::vector<double>> diffs(m - 1);
  for (int rep = 0; rep < opt.bootstrap; ++rep) {
    const auto idx = resample(rng, n);
    const auto ref = pick(dref, idx);
    std::vector<double> w(m);
    for (std::size_t k = 0; k < m; ++k) w[k] = w1_points(pick(disp[k], idx), ref);
    for (std::size_t k = 0; k + 1 < m; ++k) diffs[k].push_back(w[k] - w[k + 1]);
  }
  for (std::size_t k = 0; k + 1 < m; ++k) {
    out.diff.push_back(out.rungs[k].w1 - out.rungs[k + 1].w1);
    out.diff_se.push_back(mean_se(diffs[k]).se * std::sqrt(static_cast<double>(diffs[k].size())));
  }
  return out;
}

}  // namespace ibm
