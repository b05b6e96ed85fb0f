#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>

#include "ibm/diagnostics/checks.hpp"
#include "ibm/diagnostics/distance.hpp"
#include "ibm/diagnostics/invariance.hpp"
#include "ibm/diagnostics/ladder.hpp"
#include "ibm/diagnostics/moments.hpp"
#include "ibm/diagnostics/stats.hpp"
#include "ibm/dynamics/integrator.hpp"
#include "ibm/errors.hpp"
#include "ibm/pointfields/correlations.hpp"
#include "ibm/random/philox.hpp"
#include "ibm/util/parallel.hpp"
#include "ibm/version.hpp"

namespace fs = std::filesystem;

namespace ibm::cli {

namespace {

using Clock = std::chrono::steady_clock;

/// Keeps the exit code of the original error while adding replica context.
class ReplicaError : public Error {
 public:
  ReplicaError(ExitCode code, const std::string& what) : Error(what), code_(code) {}
  ExitCode exit_code() const noexcept override { return code_; }

 private:
  ExitCode code_;
};

template <class Fn>
void with_replica_context(const char* what, std::size_t i, std::uint64_t seed, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    throw ReplicaError(e.exit_code(), std::string(what) + " replica " + std::to_string(i) + " (seed " +
                                          std::to_string(seed) + "): " + e.what());
  }
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '.';
    if (keep) {
      out += c;
    } else if (!out.empty() && out.back() != '-') {
      out += '-';
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

std::string indexed(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%03zu", prefix, i);
  return buf;
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + file.string());
  os << text;
}

void write_json(const fs::path& file, const nlohmann::json& j) { write_text(file, j.dump(2) + "\n"); }

nlohmann::json read_json(const fs::path& file) {
  std::ifstream is(file);
  if (!is) throw ConfigError("cannot read " + file.string());
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
}

/// CSV cell text; doubles at full round-trip precision, NaN as empty.
std::string num(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

/// Compact number for statistic names and directory names.
std::string tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

nlohmann::json manifest_base(const ExperimentConfig& cfg, const std::string& command, const ModelSpec& model) {
  return {{"schema_version", kManifestSchemaVersion},
          {"command", command},
          {"code_version", code_version()},
          {"rng", kRngName},
          {"model", model.to_json()},
          {"model_id", model.id()},
          {"seeds",
           {{"master", cfg.master_seed()}, {"replicas", cfg.replicas()}, {"derivation", "replica_seed(master, i)"}}},
          {"config", cfg.to_json()}};
}

fs::path prepare_run_dir(const ExperimentConfig& cfg, const std::string& command) {
  const fs::path dir = run_directory(cfg, command);
  fs::create_directories(dir);
  write_text(dir / "config.toml", cfg.to_toml());
  return dir;
}

std::string seed_range(const ExperimentConfig& cfg) {
  return "replica_seed(" + std::to_string(cfg.master_seed()) + ", 0.." + std::to_string(cfg.replicas() - 1) + ")";
}

// --- simulate -----------------------------------------------------------

std::size_t moving_in(const Frame& f) {
  return static_cast<std::size_t>(std::count_if(f.particles.begin(), f.particles.end(),
                                                [](const Particle& p) { return !p.frozen; }));
}

nlohmann::json replica_manifest(const ExperimentConfig& cfg, const ModelSpec& model, const SchemeParams& sp,
                                std::size_t i, std::uint64_t seed, const PathRecord& rec, bool complete) {
  nlohmann::json m = manifest_base(cfg, "simulate", model);
  m["replica"] = i;
  m["seed"] = seed;
  m["scheme"] = sp.to_json();
  m["complete"] = complete;
  m["path"] = rec.meta_json();
  return m;
}

DiagnosticsReport simulate_report(const ExperimentConfig& cfg, const ModelSpec& model, const SchemeParams& sp,
                                  const std::vector<PathRecord>& recs) {
  DiagnosticsReport rep("simulate " + to_string(sp.scheme) + " R=" + tag(sp.R) + " " + model.id());
  rep.set_seed_range(seed_range(cfg));
  const std::size_t n = recs.size();
  std::vector<double> start(n), end(n);
  std::size_t births = 0, deaths = 0, freezes = 0;
  std::int64_t retried = 0;
  bool conserved = true;
  double gap = std::numeric_limits<double>::infinity();
  const bool origin = model.kind == ModelKind::kBessel;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = recs[i];
    start[i] = static_cast<double>(moving_in(r.frames.front()));
    end[i] = static_cast<double>(moving_in(r.frames.back()));
    for (const auto& f : r.frames) conserved = conserved && moving_in(f) == moving_in(r.frames.front());
    for (const auto& e : r.events) {
      births += e.kind == EventKind::kBirth;
      deaths += e.kind == EventKind::kDeath;
      freezes += e.kind == EventKind::kFreeze;
    }
    retried += r.retried_steps;
    gap = std::min(gap, min_gap(r, origin));
  }
  auto add_mean = [&](const std::string& name, const std::vector<double>& v) {
    if (v.size() >= 2) {
      const MeanSe m = mean_se(v);
      rep.add(name, m.mean, m.se, n);
    } else {
      rep.add(name, v.front(), std::nullopt, n, "single replica");
    }
  };
  add_mean("moving particles at t=0", start);
  add_mean("moving particles at t_end", end);
  rep.add("births", static_cast<double>(births), std::nullopt, n);
  rep.add("deaths", static_cast<double>(deaths), std::nullopt, n);
  rep.add("freezes", static_cast<double>(freezes), std::nullopt, n);
  rep.add("retried steps", static_cast<double>(retried), std::nullopt, n);
  rep.add("min gap", gap, std::nullopt, n, origin ? "includes distance to the origin" : "");
  if (sp.scheme == Scheme::kLower) {
    rep.verdict("moving count conserved", conserved, "moving count equal in every recorded frame",
                {"moving particles at t=0", "moving particles at t_end"});
  }
  rep.set_provenance({{"scheme", sp.to_json()}, {"model", model.to_json()}});
  return rep;
}

class ProgressLog {
 public:
  ProgressLog(std::string tag, bool quiet) : tag_(std::move(tag)), quiet_(quiet), t0_(Clock::now()) {}

  ProgressFn fn() {
    if (quiet_) return {};
    return [this](std::int64_t step, std::int64_t total) {
      const std::int64_t decile = total > 0 ? step * 10 / total : 10;
      if (decile == last_) return;
      last_ = decile;
      const double sec = std::chrono::duration<double>(Clock::now() - t0_).count();
      std::fprintf(stderr, "%s: step %lld/%lld (%.0f steps/s)\n", tag_.c_str(), static_cast<long long>(step),
                   static_cast<long long>(total), sec > 0.0 ? static_cast<double>(step - first_) / sec : 0.0);
    };
  }
  void set_first(std::int64_t s) {
    first_ = s;
    t0_ = Clock::now();
  }

 private:
  std::string tag_;
  bool quiet_;
  Clock::time_point t0_;
  std::int64_t last_ = -1;
  std::int64_t first_ = 0;
};

CommandResult simulate_in(const fs::path& dir, const ExperimentConfig& cfg, const SimulateOptions& opt, bool resume) {
  const ModelSpec model = cfg.model();
  SchemeParams sp = cfg.scheme();
  const std::size_t n = cfg.replicas();
  const std::uint64_t master = cfg.master_seed();
  if (n > 1) sp.workers = 1;
  const std::int64_t total = sp.total_steps();
  const std::int64_t stop = opt.stop_after_steps ? std::min(*opt.stop_after_steps, total) : total;
  if (stop < 0) throw ConfigError("--stop-after-steps must be nonnegative");

  const std::string init_file = cfg.get_string("sampler.init_file");
  std::unique_ptr<ModelSampler> sampler;
  if (!resume && init_file.empty()) sampler = std::make_unique<ModelSampler>(model, cfg.sampler(model));
  std::optional<Configuration> fixed_init;
  if (!resume && !init_file.empty()) fixed_init = read_configuration_csv(fs::path(init_file));

  std::vector<PathRecord> recs(n);
  std::vector<char> complete(n, 0);
  std::atomic<std::int64_t> steps_done{0};
  ProgressLog log("simulate replica 0", opt.quiet);
  const auto t0 = Clock::now();

  parallel_for(
      n,
      [&](std::size_t i) {
        const std::uint64_t seed = replica_seed(master, i);
        with_replica_context("simulate", i, seed, [&] {
          const fs::path rdir = dir / indexed("replica", i);
          fs::create_directories(rdir);
          const Integrator integ(model, sp, seed);
          SimState state;
          PathRecord& rec = recs[i];
          if (resume) {
            if (!fs::exists(rdir / "checkpoint.json")) {
              rec = read_path_dir(rdir);
              complete[i] = 1;
              return;
            }
            integ.restore(read_json(rdir / "checkpoint.json"), state, rec);
          } else {
            state = integ.init(fixed_init ? *fixed_init : sampler->sample(seed));
            rec = integ.start(state);
          }
          const std::int64_t from = state.step;
          if (i == 0) log.set_first(from);
          integ.run_until(state, rec, std::max(stop, state.step), i == 0 ? log.fn() : ProgressFn{});
          steps_done += state.step - from;
          complete[i] = state.step >= total;
          write_path_files(rdir, rec);
          write_json(rdir / "manifest.json", replica_manifest(cfg, model, sp, i, seed, rec, complete[i] != 0));
          if (complete[i]) {
            fs::remove(rdir / "checkpoint.json");
          } else {
            write_json(rdir / "checkpoint.json", integ.checkpoint(state, rec));
          }
        });
      },
      cfg.workers());

  const double sec = std::chrono::duration<double>(Clock::now() - t0).count();
  if (!opt.quiet) {
    std::fprintf(stderr, "simulate: %zu replicas, %lld steps in %.2f s (%.0f steps/s)\n", n,
                 static_cast<long long>(steps_done.load()), sec,
                 sec > 0.0 ? static_cast<double>(steps_done.load()) / sec : 0.0);
  }

  const bool all_done = std::all_of(complete.begin(), complete.end(), [](char c) { return c != 0; });
  nlohmann::json m = manifest_base(cfg, "simulate", model);
  m["scheme"] = sp.to_json();
  m["complete"] = all_done;
  m["sampler"] = init_file.empty() ? cfg.sampler(model).to_json() : nlohmann::json{{"init_file", init_file}};
  nlohmann::json reps = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    reps.push_back({{"dir", indexed("replica", i)}, {"seed", replica_seed(master, i)}});
  }
  m["replicas"] = reps;
  write_json(dir / "manifest.json", m);

  CommandResult res{dir, true};
  if (all_done) {
    const DiagnosticsReport rep = simulate_report(cfg, model, sp, recs);
    rep.write(dir);
    res.pass = rep.passed();
  }
  return res;
}

// --- verify -------------------------------------------------------------

struct LoadedRun {
  fs::path dir;
  ModelSpec model;
  std::vector<PathRecord> paths;
};

LoadedRun load_run(const fs::path& dir) {
  const nlohmann::json m = read_json(dir / "manifest.json");
  LoadedRun run;
  run.dir = dir;
  if (!m.contains("model")) throw ConfigError(dir.string() + "/manifest.json names no model");
  run.model = ModelSpec::from_json(m.at("model"));
  if (m.contains("replicas")) {
    if (!m.value("complete", true)) throw ConfigError("run " + dir.string() + " is incomplete; resume it first");
    for (const auto& r : m.at("replicas")) run.paths.push_back(read_path_dir(dir / r.at("dir").get<std::string>()));
  } else if (m.contains("path")) {
    run.paths.push_back(read_path_dir(dir));
  } else {
    throw ConfigError("run " + dir.string() + " holds no paths");
  }
  if (run.paths.empty()) throw InsufficientData("run " + dir.string() + " has no replicas");
  return run;
}

std::vector<PathRecord> pooled(const std::vector<LoadedRun>& runs) {
  std::vector<PathRecord> all;
  for (const auto& r : runs) all.insert(all.end(), r.paths.begin(), r.paths.end());
  return all;
}

void need_runs(const std::vector<LoadedRun>& runs, const std::string& check, std::size_t k = 1) {
  if (runs.size() < k) {
    throw ConfigError("check " + check + " needs " + std::to_string(k) + " run director" + (k == 1 ? "y" : "ies") +
                      " (--runs)");
  }
}

double final_time(const std::vector<PathRecord>& paths) {
  double t = std::numeric_limits<double>::infinity();
  for (const auto& p : paths) t = std::min(t, p.frames.back().time);
  return t;
}

void write_ladder_csv(const fs::path& file, const std::vector<std::string>& names, const std::vector<double>& radii,
                      const LadderResult& lad) {
  std::ostringstream os;
  os << "rung,scheme,R,w1,w1_se,intensity_dev,intensity_dev_se,n,drop,drop_se\n";
  for (std::size_t k = 0; k < lad.rungs.size(); ++k) {
    const auto& d = lad.rungs[k];
    os << k << ',' << names[k] << ',' << num(radii[k]) << ',' << num(d.w1) << ',' << num(d.w1_se) << ','
       << num(d.intensity_dev) << ',' << num(d.intensity_dev_se) << ',' << d.n_a << ',';
    if (k < lad.diff.size()) os << num(lad.diff[k]) << ',' << num(lad.diff_se[k]);
    else os << ',';
    os << '\n';
  }
  write_text(file, os.str());
}

DiagnosticsReport check_a4_cmd(const ExperimentConfig& cfg) {
  const ModelSpec model = cfg.model();
  const double r = cfg.get_float("diagnostics.r");
  const double T = cfg.get_float("diagnostics.T");
  const IntegrabilityResult a = check_a4([&](const Point& x) { return model.intensity(x); }, r, T, model.dim);
  DiagnosticsReport rep("integrability " + model.id());
  rep.add("intensity integral", a.value, std::nullopt, 0, "r=" + tag(r) + " T=" + tag(T));
  rep.add("integral shells", static_cast<double>(a.shells.size()));
  rep.verdict("intensity integral finite", a.finite && std::isfinite(a.value), "shell contributions vanish", {"intensity integral"});
  rep.set_provenance({{"model", model.to_json()}, {"r", r}, {"T", T}});
  return rep;
}

DiagnosticsReport check_invariance_cmd(const ExperimentConfig& cfg, const std::vector<LoadedRun>& runs) {
  need_runs(runs, "invariance");
  const auto paths = pooled(runs);
  const ModelSpec& model = runs.front().model;
  double w = cfg.get_float("diagnostics.window");
  if (!(w > 0.0)) w = paths.front().R;
  std::vector<double> cps = cfg.get_floats("diagnostics.checkpoints");
  if (cps.empty()) cps = {final_time(paths)};
  InvarianceOptions opt;
  opt.corr = cfg.correlations();
  opt.tol_se = cfg.get_float("diagnostics.tol_se");
  return invariance_from_paths(paths, cps, sampler_window(model, w), opt);
}

DiagnosticsReport check_ladder_cmd(const ExperimentConfig& cfg, const std::vector<LoadedRun>& runs,
                                   const fs::path& dir) {
  need_runs(runs, "scheme-ladder", 2);
  const ModelSpec& model = runs.front().model;
  std::vector<std::vector<PathRecord>> rungs;
  std::vector<std::string> names;
  std::vector<double> radii;
  double t = cfg.get_float("diagnostics.t");
  for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
    rungs.push_back(runs[k].paths);
    names.push_back(runs[k].paths.front().scheme);
    radii.push_back(runs[k].paths.front().R);
  }
  const auto& ref = runs.back().paths;
  if (!(t > 0.0)) {
    t = std::numeric_limits<double>::infinity();
    for (const auto& r : runs) t = std::min(t, final_time(r.paths));
  }
  double w = cfg.get_float("diagnostics.window");
  if (!(w > 0.0)) w = cfg.get_float("ladder.analysis_window");
  DistanceOptions dopt;
  dopt.label = cfg.get_int("diagnostics.label");
  dopt.bootstrap = static_cast<int>(cfg.get_int("diagnostics.bootstrap"));
  dopt.seed = cfg.master_seed();
  const LadderResult lad = ladder_distance(rungs, ref, sampler_window(model, w), t, dopt);
  write_ladder_csv(dir / "ladder.csv", names, radii, lad);

  const double z = cfg.get_float("ladder.z_decrease");
  DiagnosticsReport rep("scheme ladder " + model.id());
  std::vector<std::string> inputs;
  for (std::size_t k = 0; k < lad.rungs.size(); ++k) {
    const std::string name = "W1 " + names[k] + " R=" + tag(radii[k]) + " (" + runs[k].dir.filename().string() + ")";
    rep.add(name, lad.rungs[k].w1, lad.rungs[k].w1_se, lad.rungs[k].n_a, "t=" + tag(t));
    rep.add("intensity dev " + names[k] + " R=" + tag(radii[k]), lad.rungs[k].intensity_dev,
            lad.rungs[k].intensity_dev_se, lad.rungs[k].n_a);
    inputs.push_back(name);
  }
  for (std::size_t k = 0; k < lad.diff.size(); ++k) {
    const std::string name = "W1 drop " + std::to_string(k) + "->" + std::to_string(k + 1);
    rep.add(name, lad.diff[k], lad.diff_se[k], lad.rungs[k].n_a, "paired bootstrap over replicas");
    inputs.push_back(name);
  }
  rep.verdict("scheme distance strictly decreasing", lad.strictly_decreasing(z),
              "each drop > 0 and > " + tag(z) + " SE", inputs);
  rep.set_provenance({{"reference", runs.back().dir.string()}, {"t", t}, {"window", w}});
  return rep;
}

DiagnosticsReport check_moment_cmd(const ExperimentConfig& cfg, const std::vector<LoadedRun>& runs,
                                   const fs::path& dir) {
  need_runs(runs, "moment");
  MomentOptions opt;
  opt.label = cfg.get_int("diagnostics.label");
  const MomentResult res = moment4_check(pooled(runs), cfg.get_floats("diagnostics.lags"), opt);
  std::ostringstream os;
  os << "lag,moment,moment_se\n";
  for (std::size_t k = 0; k < res.lags.size(); ++k) {
    os << num(res.lags[k]) << ',' << num(res.moment[k]) << ',' << num(res.moment_se[k]) << '\n';
  }
  write_text(dir / "moments.csv", os.str());
  return res.report();
}

DiagnosticsReport check_nbj_cmd(const ExperimentConfig& cfg, const std::vector<LoadedRun>& runs, const fs::path& dir) {
  need_runs(runs, "nbj");
  const auto paths = pooled(runs);
  double r = cfg.get_float("diagnostics.r");
  if (!(r > 0.0)) r = 1.0;
  double T = cfg.get_float("diagnostics.T");
  T = std::min(T, final_time(paths));
  std::ostringstream os;
  os << "replica,index\n";
  std::vector<double> idx;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    idx.push_back(static_cast<double>(nbj_index(paths[i], r, T)));
    os << i << ',' << static_cast<std::int64_t>(idx.back()) << '\n';
  }
  write_text(dir / "nbj.csv", os.str());
  DiagnosticsReport rep("non-big-jump index");
  if (idx.size() >= 2) {
    const MeanSe m = mean_se(idx);
    rep.add("nbj index mean", m.mean, m.se, idx.size(), "r=" + tag(r) + " T=" + tag(T));
  }
  rep.add("nbj index max", *std::max_element(idx.begin(), idx.end()), std::nullopt, idx.size());
  return rep;
}

DiagnosticsReport check_min_gap_cmd(const std::vector<LoadedRun>& runs) {
  need_runs(runs, "min-gap");
  const bool origin = runs.front().model.kind == ModelKind::kBessel;
  double gap = std::numeric_limits<double>::infinity();
  const auto paths = pooled(runs);
  for (const auto& p : paths) gap = std::min(gap, min_gap(p, origin));
  DiagnosticsReport rep("minimum gap");
  rep.add("min gap", gap, std::nullopt, paths.size(), origin ? "includes distance to the origin" : "");
  rep.verdict("no collision", gap > 0.0, "min gap > 0", {"min gap"});
  return rep;
}

}  // namespace

fs::path run_directory(const ExperimentConfig& cfg, const std::string& command) {
  std::string id = cfg.get_string("run.run_id");
  if (id.empty()) id = command + "-" + sanitize(cfg.model().id()) + "-" + cfg.fingerprint(command);
  return fs::path(cfg.get_string("run.output_dir")) / id;
}

ExperimentConfig config_from_manifest(const fs::path& manifest) {
  const nlohmann::json m = read_json(manifest);
  if (!m.contains("config")) throw ConfigError(manifest.string() + " has no config block");
  return ExperimentConfig::from_json(m.at("config"));
}

CommandResult cmd_sample(const ExperimentConfig& cfg) {
  const ModelSpec model = cfg.model();
  const SamplerSpec spec = cfg.sampler(model);
  const ModelSampler sampler(model, spec);
  const std::size_t n = cfg.replicas();
  const std::uint64_t master = cfg.master_seed();
  const CorrelationOptions corr = cfg.correlations();
  const fs::path dir = prepare_run_dir(cfg, "sample");

  std::vector<Configuration> samples(n, Configuration(model.dim));
  parallel_for(
      n,
      [&](std::size_t i) {
        const std::uint64_t seed = replica_seed(master, i);
        with_replica_context("sample", i, seed, [&] { samples[i] = sampler.sample(seed); });
      },
      cfg.workers());

  fs::create_directories(dir / "samples");
  nlohmann::json files = nlohmann::json::array();
  std::vector<double> counts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string name = "samples/" + indexed("sample", i) + ".csv";
    write_configuration_csv(dir / name, samples[i]);
    counts[i] = static_cast<double>(samples[i].size());
    files.push_back({{"file", name}, {"seed", replica_seed(master, i)}, {"count", samples[i].size()}});
  }

  nlohmann::json m = manifest_base(cfg, "sample", model);
  m["sampler"] = spec.to_json();
  m["sampler"]["resolved_method"] = sampler.method();
  m["window"] = {{"radius", spec.window}, {"volume", window_volume(sampler.window())}};
  m["samples"] = files;
  write_json(dir / "manifest.json", m);

  DiagnosticsReport rep("sample " + model.id() + " (" + sampler.method() + ")");
  rep.set_seed_range(seed_range(cfg));
  const double vol = window_volume(sampler.window());
  if (n >= 2) {
    const MeanSe c = mean_se(counts);
    rep.add("count in window", c.mean, c.se, n, "window volume " + tag(vol));
    const CorrelationEstimate est = estimate_correlations(samples, sampler.window(), corr);
    rep.add("intensity (inner window)", est.intensity, est.intensity_se, n);
    std::ostringstream os;
    os << "r_lo,r_hi,g,g_se\n";
    for (std::size_t k = 0; k < est.g.size(); ++k) {
      os << num(est.r_lo[k]) << ',' << num(est.r_hi[k]) << ',' << num(est.g[k]) << ',' << num(est.g_se[k]) << '\n';
      rep.add("g[" + tag(est.r_lo[k]) + "," + tag(est.r_hi[k]) + ")", est.g[k], est.g_se[k], n);
    }
    write_text(dir / "g.csv", os.str());
  } else {
    rep.add("count in window", counts.front(), std::nullopt, 1, "single replica");
  }
  rep.set_provenance({{"model", model.to_json()}, {"sampler", m["sampler"]}});
  rep.write(dir);
  return {dir, rep.passed()};
}

CommandResult cmd_simulate(const ExperimentConfig& cfg, const SimulateOptions& opt) {
  cfg.scheme();  // validate before touching the file system
  const fs::path dir = prepare_run_dir(cfg, "simulate");
  return simulate_in(dir, cfg, opt, false);
}

CommandResult cmd_resume(const fs::path& run_dir, const SimulateOptions& opt) {
  const nlohmann::json m = read_json(run_dir / "manifest.json");
  if (m.value("command", "") != "simulate") throw ConfigError(run_dir.string() + " is not a simulate run");
  const ExperimentConfig cfg = ExperimentConfig::from_file(run_dir / "config.toml");
  return simulate_in(run_dir, cfg, opt, true);
}

CommandResult cmd_verify(const ExperimentConfig& cfg) {
  const auto checks = cfg.get_strings("diagnostics.checks");
  if (checks.empty()) throw ConfigError("verify: no checks requested (--check or diagnostics.checks)");
  static const std::vector<std::string> known = {"a4", "invariance", "scheme-ladder", "moment", "nbj", "min-gap"};
  for (const auto& c : checks) {
    if (std::find(known.begin(), known.end(), c) == known.end()) {
      throw ConfigError("verify: unknown check \"" + c + "\" (a4, invariance, scheme-ladder, moment, nbj, min-gap)");
    }
  }
  std::vector<LoadedRun> runs;
  for (const auto& r : cfg.get_strings("diagnostics.runs")) runs.push_back(load_run(r));
  for (std::size_t k = 1; k < runs.size(); ++k) {
    if (runs[k].model.id() != runs[0].model.id()) {
      throw ConfigError("verify: runs mix models " + runs[0].model.id() + " and " + runs[k].model.id());
    }
  }

  const fs::path dir = prepare_run_dir(cfg, "verify");
  DiagnosticsReport rep("verify");
  for (const auto& c : checks) {
    DiagnosticsReport part;
    if (c == "a4") part = check_a4_cmd(cfg);
    if (c == "invariance") part = check_invariance_cmd(cfg, runs);
    if (c == "scheme-ladder") part = check_ladder_cmd(cfg, runs, dir);
    if (c == "moment") part = check_moment_cmd(cfg, runs, dir);
    if (c == "nbj") part = check_nbj_cmd(cfg, runs, dir);
    if (c == "min-gap") part = check_min_gap_cmd(runs);
    rep.merge(part);
  }
  nlohmann::json runs_json = nlohmann::json::array();
  for (const auto& r : runs) runs_json.push_back({{"dir", r.dir.string()}, {"model_id", r.model.id()}});
  rep.set_provenance({{"checks", checks}, {"runs", runs_json}});
  rep.write(dir);

  nlohmann::json m = manifest_base(cfg, "verify", runs.empty() ? cfg.model() : runs.front().model);
  m["checks"] = checks;
  m["runs"] = runs_json;
  write_json(dir / "manifest.json", m);
  return {dir, rep.passed()};
}

CommandResult cmd_ladder(const ExperimentConfig& cfg, const LadderOptions& opt) {
  const ModelSpec model = cfg.model();
  const LadderSpec spec = cfg.ladder(model);
  SamplerSpec ss = cfg.sampler(model);
  ss.window = cfg.get_float("ladder.sample_window");
  const ModelSampler sampler(model, ss);
  const fs::path dir = prepare_run_dir(cfg, "ladder");

  const auto t0 = Clock::now();
  std::fprintf(stderr, "ladder: %zu replicas, R = %zu rungs + reference R_big = %g\n", spec.replicas, spec.R.size(),
               spec.R_big);
  const LadderOutcome out = run_ladder(model, spec, sampler, opt.keep_paths);
  std::fprintf(stderr, "ladder: done in %.1f s\n", std::chrono::duration<double>(Clock::now() - t0).count());

  std::vector<std::string> names(spec.R.size(), "lower");
  std::vector<double> radii = spec.R;
  LadderResult table = out.lower;
  if (out.has_upper) {
    names.push_back("upper");
    radii.push_back(spec.upper_R);
    table.rungs.push_back(out.upper);
  }
  write_ladder_csv(dir / "ladder.csv", names, radii, table);
  if (out.has_upper) {
    std::ofstream os(dir / "ladder_upper.csv", std::ios::binary);
    os << "R,diff_lower_minus_upper,diff_se\n" << num(spec.upper_R) << ',' << num(out.upper_diff) << ','
       << num(out.upper_diff_se) << '\n';
  }

  nlohmann::json m = manifest_base(cfg, "ladder", model);
  m["ladder"] = spec.to_json();
  m["sampler"] = ss.to_json();
  m["sampler"]["resolved_method"] = sampler.method();

  if (opt.keep_paths) {
    auto dump = [&](const std::string& name, const std::vector<PathRecord>& recs) {
      const fs::path sub = dir / name;
      nlohmann::json reps = nlohmann::json::array();
      for (std::size_t i = 0; i < recs.size(); ++i) {
        const fs::path rdir = sub / indexed("replica", i);
        fs::create_directories(rdir);
        write_path_files(rdir, recs[i]);
        nlohmann::json rm = manifest_base(cfg, "ladder", model);
        rm["replica"] = i;
        rm["seed"] = recs[i].seed;
        rm["path"] = recs[i].meta_json();
        write_json(rdir / "manifest.json", rm);
        reps.push_back({{"dir", indexed("replica", i)}, {"seed", recs[i].seed}});
      }
      nlohmann::json sm = manifest_base(cfg, "ladder", model);
      sm["complete"] = true;
      sm["replicas"] = reps;
      write_json(sub / "manifest.json", sm);
    };
    nlohmann::json subs = nlohmann::json::array();
    for (std::size_t k = 0; k < spec.R.size(); ++k) {
      const std::string name = "lower-R" + tag(spec.R[k]);
      dump(name, out.lower_paths[k]);
      subs.push_back(name);
    }
    dump("reference-R" + tag(spec.R_big), out.reference_paths);
    subs.push_back("reference-R" + tag(spec.R_big));
    if (out.has_upper) {
      dump("upper-R" + tag(spec.upper_R), out.upper_paths);
      subs.push_back("upper-R" + tag(spec.upper_R));
    }
    m["path_sets"] = subs;
  }
  write_json(dir / "manifest.json", m);
  out.report.write(dir);
  return {dir, out.report.passed()};
}

}  // namespace ibm::cli
