#include "ibm/diagnostics/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "ibm/errors.hpp"
#include "ibm/random/philox.hpp"
#include "ibm/util/parallel.hpp"

namespace ibm {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

void LadderSpec::validate() const {
  if (R.empty()) throw ConfigError("ladder: need at least one lower-scheme radius");
  if (!std::is_sorted(R.begin(), R.end()) || std::adjacent_find(R.begin(), R.end()) != R.end()) {
    throw ConfigError("ladder: radii must be strictly increasing");
  }
  if (!(R_big > R.back())) throw ConfigError("ladder: R_big must exceed every lower-scheme radius");
  if (upper_R > 0.0 && std::find(R.begin(), R.end(), upper_R) == R.end()) {
    throw ConfigError("ladder: upper_R must be one of the lower-scheme radii");
  }
  if (!(t > 0.0) || !(dt > 0.0)) throw ConfigError("ladder: t and dt must be positive");
  if (replicas < 2) throw InsufficientData("ladder: need at least 2 replicas");
  if (!(analysis_window > 0.0)) throw ConfigError("ladder: analysis_window must be positive");
}

nlohmann::json LadderSpec::to_json() const {
  return {{"R", R},
          {"R_big", R_big},
          {"upper_R", upper_R},
          {"t", t},
          {"dt", dt},
          {"analysis_window", analysis_window},
          {"replicas", replicas},
          {"seed", seed},
          {"z_decrease", z_decrease},
          {"z_upper", z_upper},
          {"bootstrap", bootstrap}};
}

LadderOutcome run_ladder(const ModelSpec& model, const LadderSpec& spec, const ModelSampler& sampler,
                         bool keep_paths) {
  spec.validate();
  const std::size_t n = spec.replicas;
  const std::size_t m = spec.R.size();
  const bool upper = spec.upper_R > 0.0;

  auto params = [&](Scheme s, double R) {
    SchemeParams p;
    p.scheme = s;
    p.R = R;
    p.dt = spec.dt;
    p.t_end = spec.t;
    p.drift = spec.drift;
    p.record_stride = static_cast<int>(std::max<std::int64_t>(1, std::llround(spec.t / spec.dt)));
    p.workers = 1;
    return p;
  };

  std::vector<std::vector<PathRecord>> lower(m, std::vector<PathRecord>(n));
  std::vector<PathRecord> ref(n), up(upper ? n : 0);
  parallel_for(
      n,
      [&](std::size_t i) {
        const std::uint64_t s = replica_seed(spec.seed, i);
        const Configuration init = sampler.sample(s);
        for (std::size_t k = 0; k < m; ++k) {
          lower[k][i] = Integrator(model, params(Scheme::kLower, spec.R[k]), s).run(init);
        }
        ref[i] = Integrator(model, params(Scheme::kReference, spec.R_big), s).run(init);
        if (upper) up[i] = Integrator(model, params(Scheme::kUpper, spec.upper_R), s).run(init);
      },
      spec.workers);

  const Window window = sampler_window(model, spec.analysis_window);
  DistanceOptions dopt;
  dopt.bootstrap = spec.bootstrap;
  dopt.seed = spec.seed;

  LadderOutcome out;
  out.lower = ladder_distance(lower, ref, window, spec.t, dopt);
  out.decreasing = out.lower.strictly_decreasing(spec.z_decrease);

  DiagnosticsReport& rep = out.report;
  rep = DiagnosticsReport("scheme-convergence ladder");
  rep.set_seed_range("replica_seed(" + std::to_string(spec.seed) + ", 0.." + std::to_string(n - 1) + ")");
  std::vector<std::string> inputs;
  for (std::size_t k = 0; k < m; ++k) {
    const auto& d = out.lower.rungs[k];
    const std::string tag = "lower R=" + fmt(spec.R[k]);
    rep.add("W1 " + tag, d.w1, d.w1_se, n, "tagged displacement at t vs reference");
    rep.add("intensity dev " + tag, d.intensity_dev, d.intensity_dev_se, n);
    inputs.push_back("W1 " + tag);
  }
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const std::string name = "W1 drop " + std::to_string(k) + "->" + std::to_string(k + 1);
    rep.add(name, out.lower.diff[k], out.lower.diff_se[k], n, "paired bootstrap over replicas");
    inputs.push_back(name);
  }
  rep.verdict("lower ladder strictly decreasing", out.decreasing,
              "each drop > 0 and > " + fmt(spec.z_decrease) + " SE", inputs);

  if (upper) {
    const auto k = static_cast<std::size_t>(std::find(spec.R.begin(), spec.R.end(), spec.upper_R) - spec.R.begin());
    const auto pair = ladder_distance({lower[k], up}, ref, window, spec.t, dopt);
    out.has_upper = true;
    out.upper = pair.rungs[1];
    out.upper_diff = pair.diff[0];
    out.upper_diff_se = pair.diff_se[0];
    const SchemeDistance& lower_k = out.lower.rungs[k];
    out.upper_consistent = std::fabs(out.upper_diff) <= spec.z_upper * lower_k.w1_se;
    rep.add("W1 upper R=" + fmt(spec.upper_R), out.upper.w1, out.upper.w1_se, n,
            "surrogate boundary");
    rep.add("W1 lower - upper", out.upper_diff, out.upper_diff_se, n, "paired bootstrap over replicas");
    rep.verdict("upper surrogate matches lower", out.upper_consistent,
                "|d_lower - d_upper| <= " + fmt(spec.z_upper) + " x SE of the lower R=" + fmt(spec.upper_R) +
                    " distance",
                {"W1 upper R=" + fmt(spec.upper_R), "W1 lower R=" + fmt(spec.upper_R)});
    rep.caveat("the upper scheme boundary (ghost-shell births, deaths on exit) is a numerical surrogate");
  }
  rep.set_provenance({{"model", model.to_json()}, {"ladder", spec.to_json()}, {"sampler", sampler.method()}});

  if (keep_paths) {
    out.lower_paths = std::move(lower);
    out.reference_paths = std::move(ref);
    out.upper_paths = std::move(up);
  }
  return out;
}

}  // namespace ibm
