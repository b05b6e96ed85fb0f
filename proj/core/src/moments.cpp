#include "ibm/diagnostics/moments.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "ibm/errors.hpp"

namespace ibm {

MomentResult moment4_check(const std::vector<PathRecord>& paths, const std::vector<double>& lags,
                           const MomentOptions& opt) {
  if (lags.size() < 3) throw ConfigError("moment4_check: need at least 3 lags");
  for (double l : lags) {
    if (!(l > 0.0)) throw ConfigError("moment4_check: lags must be positive");
  }
  MomentResult out;
  out.lags = lags;
  std::vector<std::vector<double>> per_replica(lags.size());
  for (const auto& path : paths) {
    if (path.frames.size() < 2) continue;
    const Particle* p0 = path.frames.front().find(opt.label);
    if (p0 == nullptr || p0->frozen) continue;
    const double spacing = path.frames[1].time - path.frames[0].time;
    const auto traj = path.trajectory(opt.label);
    for (std::size_t l = 0; l < lags.size(); ++l) {
      const double m_real = lags[l] / spacing;
      const auto m = static_cast<std::size_t>(std::llround(m_real));
      if (m == 0 || std::fabs(m_real - static_cast<double>(m)) > 1e-6 * std::max(1.0, m_real)) {
        throw ConfigError("moment4_check: lag " + std::to_string(lags[l]) + " is not a multiple of the frame spacing");
      }
      double acc = 0.0;
      std::size_t cnt = 0;
      for (std::size_t i = 0; i + m < traj.size(); ++i) {
        if (!traj[i] || !traj[i + m]) continue;
        const double d2 = (*traj[i + m] - *traj[i]).norm2();
        acc += d2 * d2;
        ++cnt;
      }
      if (cnt == 0) throw ConfigError("moment4_check: lag " + std::to_string(lags[l]) + " exceeds the path length");
      per_replica[l].push_back(acc / static_cast<double>(cnt));
    }
    ++out.replicas_used;
  }
  if (out.replicas_used < 2) throw InsufficientData("moment4_check: fewer than 2 usable replicas");

  std::vector<double> lx, ly, ls;
  for (std::size_t l = 0; l < lags.size(); ++l) {
    const MeanSe m = mean_se(per_replica[l]);
    out.moment.push_back(m.mean);
    out.moment_se.push_back(m.se);
    if (!(m.mean > 0.0)) throw NumericError("moment4_check: zero fourth moment at a lag");
    lx.push_back(std::log(lags[l]));
    ly.push_back(std::log(m.mean));
    ls.push_back(std::max(m.se / m.mean, 1e-12));
  }
  out.fit = linear_fit(lx, ly, ls);
  out.constant = std::exp(out.fit.intercept);
  out.ci_lo = out.fit.slope - 1.96 * out.fit.se_slope;
  out.ci_hi = out.fit.slope + 1.96 * out.fit.se_slope;
  out.slope_lo = opt.slope_lo;
  out.slope_hi = opt.slope_hi;
  out.pass = out.fit.slope >= opt.slope_lo && out.fit.slope <= opt.slope_hi;
  return out;
}

DiagnosticsReport MomentResult::report() const {
  DiagnosticsReport r("fourth-moment growth");
  for (std::size_t l = 0; l < lags.size(); ++l) {
    r.add("E|dX|^4 lag=" + std::to_string(lags[l]), moment[l], moment_se[l], replicas_used);
  }
  r.add("slope", fit.slope, fit.se_slope, replicas_used, "log-log weighted fit");
  r.add("slope_ci_lo", ci_lo, std::nullopt, replicas_used);
  r.add("slope_ci_hi", ci_hi, std::nullopt, replicas_used);
  r.add("constant", constant, constant * fit.se_intercept, replicas_used, "exp(intercept)");
  char rule[64];
  std::snprintf(rule, sizeof rule, "slope in [%g, %g]", slope_lo, slope_hi);
  r.verdict("moment slope", pass, rule,
            {"slope"});
  return r;
}

}  // namespace ibm
