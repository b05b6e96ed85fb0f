#include "cli.hpp"

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "ibm/errors.hpp"
#include "ibm/version.hpp"

namespace ibm::cli {

namespace {

/// Options every subcommand accepts. Flags override --set, which overrides the file.
struct Common {
  std::string config_file;
  std::string manifest;
  std::vector<std::string> sets;
  std::optional<std::string> model, scheme, output, run_id;
  std::optional<std::string> window, replicas, seed, R, t_end, dt, workers;
  bool quiet = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "TOML experiment file")->check(CLI::ExistingFile);
    app->add_option("--manifest", manifest, "rebuild the configuration recorded in a manifest.json")
        ->check(CLI::ExistingFile)
        ->excludes("--config");
    app->add_option("--set", sets, "override, section.key=value (repeatable)");
    app->add_option("--model", model, "sine1, sine2, sine4, bessel, ginibre, poisson or ruelle");
    app->add_option("--window", window, "sampling window radius (sampler.window)");
    app->add_option("--replicas", replicas, "number of replicas (seeds.replicas)");
    app->add_option("--seed", seed, "master seed (seeds.master)");
    app->add_option("--output", output, "output directory (run.output_dir)");
    app->add_option("--run-id", run_id, "run directory name (run.run_id)");
    app->add_option("--scheme", scheme, "lower, upper or reference (scheme.type)");
    app->add_option("--R", R, "scheme radius (scheme.R)");
    app->add_option("--t-end", t_end, "time horizon (scheme.t_end)");
    app->add_option("--dt", dt, "time step (scheme.dt)");
    app->add_option("--workers", workers, "worker threads, 0 = all (capped by IBM_THREADS)");
    app->add_flag("--quiet", quiet, "no progress output");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg;
    if (!manifest.empty()) cfg = config_from_manifest(manifest);
    if (!config_file.empty()) cfg = ExperimentConfig::from_file(config_file);
    for (const auto& s : sets) cfg.set(s);
    auto str = [&](const char* key, const std::optional<std::string>& v) {
      if (v) cfg.set(key, nlohmann::json(*v).dump());
    };
    auto raw = [&](const char* key, const std::optional<std::string>& v) {
      if (v) cfg.set(key, *v);
    };
    if (model) cfg.set_model_shorthand(*model);
    raw("sampler.window", window);
    raw("seeds.replicas", replicas);
    raw("seeds.master", seed);
    str("run.output_dir", output);
    str("run.run_id", run_id);
    str("scheme.type", scheme);
    raw("scheme.R", R);
    raw("scheme.t_end", t_end);
    raw("scheme.dt", dt);
    raw("run.workers", workers);
    return cfg;
  }
};

void print_result(const CommandResult& r) {
  std::cout << "run directory: " << r.run_dir.string() << '\n';
  const auto report = r.run_dir / "report.json";
  std::ifstream is(report);
  if (!is) return;
  const auto j = nlohmann::json::parse(is, nullptr, false);
  if (j.is_discarded() || !j.contains("verdicts")) return;
  for (const auto& v : j.at("verdicts")) {
    std::cout << (v.value("pass", false) ? "PASS " : "FAIL ") << v.value("name", "") << '\n';
  }
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Finite-volume schemes and diagnostics for infinite-dimensional Brownian motions", "ibm"};
  app.set_version_flag("--version", std::string(code_version()));
  app.require_subcommand(1);

  Common c_sample, c_sim, c_verify, c_ladder;
  auto* sample = app.add_subcommand("sample", "draw equilibrium configurations");
  c_sample.attach(sample);

  auto* simulate = app.add_subcommand("simulate", "run a finite-volume scheme on each replica");
  c_sim.attach(simulate);
  std::optional<std::int64_t> stop_after;
  std::string resume, init;
  simulate->add_option("--stop-after-steps", stop_after, "stop early and write checkpoints");
  simulate->add_option("--resume", resume, "continue a stopped run directory in place")->check(CLI::ExistingDirectory);
  simulate->add_option("--init", init, "initial configuration CSV (label,frozen,x1[,x2])")->check(CLI::ExistingFile);

  auto* verify = app.add_subcommand("verify", "run diagnostics on stored runs");
  c_verify.attach(verify);
  std::vector<std::string> checks, runs;
  verify->add_option("--check", checks, "a4, invariance, scheme-ladder, moment, nbj, min-gap")->delimiter(',');
  verify->add_option("--runs", runs, "run directories; for scheme-ladder the last one is the reference")
      ->delimiter(',');

  auto* ladder = app.add_subcommand("ladder", "scheme-convergence sweep against a reference run");
  c_ladder.attach(ladder);
  bool keep_paths = false;
  ladder->add_flag("--keep-paths", keep_paths, "also write every rung's paths");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::kConfigError);
  }

  try {
    CommandResult res;
    if (sample->parsed()) {
      res = cmd_sample(c_sample.resolve());
    } else if (simulate->parsed()) {
      SimulateOptions opt;
      opt.stop_after_steps = stop_after;
      opt.quiet = c_sim.quiet;
      if (!resume.empty()) {
        res = cmd_resume(resume, opt);
      } else {
        ExperimentConfig cfg = c_sim.resolve();
        if (!init.empty()) cfg.set("sampler.init_file", nlohmann::json(init).dump());
        res = cmd_simulate(cfg, opt);
      }
    } else if (verify->parsed()) {
      ExperimentConfig cfg = c_verify.resolve();
      if (!checks.empty()) cfg.set("diagnostics.checks", nlohmann::json(checks).dump());
      if (!runs.empty()) cfg.set("diagnostics.runs", nlohmann::json(runs).dump());
      res = cmd_verify(cfg);
    } else if (ladder->parsed()) {
      res = cmd_ladder(c_ladder.resolve(), LadderOptions{keep_paths});
    }
    print_result(res);
    return static_cast<int>(res.pass ? ExitCode::kPass : ExitCode::kVerdictFail);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(ExitCode::kNumericError);
  }
}

}  // namespace ibm::cli
