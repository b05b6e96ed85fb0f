#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "config.hpp"

namespace ibm::cli {

inline constexpr int kManifestSchemaVersion = 1;
inline constexpr const char* kRngName = "philox4x32-10";

struct CommandResult {
  std::filesystem::path run_dir;
  /// False when some verdict of the written report failed.
  bool pass = true;
};

/// Run directory of a command: output_dir/run_id, where an empty run_id
/// becomes "<command>-<model>-<hash of the resolved config>".
std::filesystem::path run_directory(const ExperimentConfig& cfg, const std::string& command);

/// Draws seeds.replicas equilibrium configurations into samples/sample-NNN.csv
/// and estimates intensity and g over them.
CommandResult cmd_sample(const ExperimentConfig& cfg);

struct SimulateOptions {
  /// Stop every replica after this many steps and leave a checkpoint.
  std::optional<std::int64_t> stop_after_steps;
  bool quiet = false;
};

/// One replica-NNN/ directory per replica with paths.csv, events.csv and manifest.json.
CommandResult cmd_simulate(const ExperimentConfig& cfg, const SimulateOptions& opt = {});

/// Continues a stopped simulate run in place from its checkpoints.
CommandResult cmd_resume(const std::filesystem::path& run_dir, const SimulateOptions& opt = {});

/// Runs diagnostics.checks against diagnostics.runs (simulate run directories).
CommandResult cmd_verify(const ExperimentConfig& cfg);

struct LadderOptions {
  /// Also write every rung's replicas as simulate-style run directories.
  bool keep_paths = false;
};

CommandResult cmd_ladder(const ExperimentConfig& cfg, const LadderOptions& opt = {});

/// Rebuilds the configuration recorded in a manifest.json.
ExperimentConfig config_from_manifest(const std::filesystem::path& manifest);

}  // namespace ibm::cli
