#include "ibm/diagnostics/invariance.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "ibm/errors.hpp"
#include "ibm/random/philox.hpp"
#include "ibm/util/parallel.hpp"

namespace ibm {

std::vector<Configuration> samples_at(const std::vector<PathRecord>& paths, double t) {
  std::vector<Configuration> out;
  out.reserve(paths.size());
  for (const auto& p : paths) {
    const auto& f = p.frames[p.frame_at(t)];
    if (std::fabs(f.time - t) > 0.5 * p.dt + 1e-12) {
      throw ConfigError("no recorded frame at t = " + std::to_string(t) + " (nearest " + std::to_string(f.time) + ")");
    }
    Configuration c(p.dim, 0.0);
    for (const auto& q : f.particles) c.add(q.position, q.frozen);
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

bool agree(double a, double sa, double b, double sb, double tol) {
  const double s = std::sqrt(sa * sa + sb * sb);
  if (s == 0.0) return a == b;
  return std::fabs(a - b) <= tol * s;
}

std::string tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "t=%g", t);
  return buf;
}

}  // namespace

DiagnosticsReport invariance_from_paths(const std::vector<PathRecord>& paths, const std::vector<double>& checkpoints,
                                        const Window& window, const InvarianceOptions& opt) {
  if (paths.size() < 2) throw InsufficientData("invariance test needs at least 2 replicas");
  if (checkpoints.empty()) throw ConfigError("invariance test needs at least one checkpoint");
  DiagnosticsReport rep("invariance");
  rep.set_provenance({{"model_id", paths.front().model_id}, {"scheme", paths.front().scheme}, {"R", paths.front().R}});
  const std::size_t n = paths.size();
  const auto c0 = estimate_correlations(samples_at(paths, 0.0), window, opt.corr);
  rep.add("intensity@t=0", c0.intensity, c0.intensity_se, n);
  for (std::size_t k = 0; k < c0.g.size(); ++k) {
    rep.add("g[" + std::to_string(k) + "]@t=0", c0.g[k], c0.g_se[k], n,
            "r in [" + tag(c0.r_lo[k]) + ", " + tag(c0.r_hi[k]) + ")");
  }
  for (double t : checkpoints) {
    const auto ct = estimate_correlations(samples_at(paths, t), window, opt.corr);
    const std::string name = "intensity@" + tag(t);
    rep.add(name, ct.intensity, ct.intensity_se, n);
    bool ok_i = agree(c0.intensity, c0.intensity_se, ct.intensity, ct.intensity_se, opt.tol_se);
    rep.verdict("intensity " + tag(t), ok_i, "|rho(t) - rho(0)| <= " + tag(opt.tol_se) + " SE",
                {"intensity@t=0", name});
    bool ok_g = true;
    std::vector<std::string> inputs;
    for (std::size_t k = 0; k < ct.g.size(); ++k) {
      const std::string gname = "g[" + std::to_string(k) + "]@" + tag(t);
      rep.add(gname, ct.g[k], ct.g_se[k], n);
      inputs.push_back(gname);
      ok_g = ok_g && agree(c0.g[k], c0.g_se[k], ct.g[k], ct.g_se[k], opt.tol_se);
    }
    rep.verdict("pair correlation " + tag(t), ok_g,
                "every bin |g(t) - g(0)| <= " + tag(opt.tol_se) + " SE", inputs);
  }
  if (paths.front().scheme == "upper") rep.caveat("upper scheme boundary is a birth/death surrogate");
  return rep;
}

std::vector<PathRecord> run_replicas(const ModelSpec& model, const SchemeParams& scheme, const InitSampler& sampler,
                                     std::size_t replicas, std::uint64_t seed, int workers) {
  std::vector<PathRecord> out(replicas);
  SchemeParams inner = scheme;
  inner.workers = 1;
  parallel_for(
      replicas,
      [&](std::size_t i) {
        const std::uint64_t s = replica_seed(seed, i);
        out[i] = Integrator(model, inner, s).run(sampler(s));
      },
      workers);
  return out;
}

DiagnosticsReport invariance_test(const ModelSpec& model, const SchemeParams& scheme, const InitSampler& sampler,
                                  const std::vector<double>& checkpoints, const Window& window, std::size_t replicas,
                                  std::uint64_t seed, const InvarianceOptions& opt) {
  if (replicas < 2) throw InsufficientData("invariance test needs at least 2 replicas");
  const auto paths = run_replicas(model, scheme, sampler, replicas, seed, scheme.workers);
  auto rep = invariance_from_paths(paths, checkpoints, window, opt);
  rep.set_provenance({{"model", model.to_json()},
                      {"scheme", scheme.to_json()},
                      {"master_seed", seed},
                      {"replicas", replicas}});
  return rep;
}

}  // namespace ibm
