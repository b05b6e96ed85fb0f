#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ibm/diagnostics/ladder.hpp"
#include "ibm/dynamics/scheme.hpp"
#include "ibm/pointfields/correlations.hpp"
#include "ibm/pointfields/model.hpp"
#include "ibm/pointfields/sampler.hpp"

namespace ibm::cli {

/// A fully resolved experiment configuration: defaults, then the TOML file,
/// then `--set section.key=value` overrides, then command-line flags.
///
/// Every key belongs to a fixed schema; unknown sections or keys and values of
/// the wrong type raise ConfigError before anything is computed.
class ExperimentConfig {
 public:
  ExperimentConfig();
  ~ExperimentConfig();
  ExperimentConfig(const ExperimentConfig& o);
  ExperimentConfig& operator=(const ExperimentConfig& o);

  static ExperimentConfig from_file(const std::filesystem::path& file);
  static ExperimentConfig from_toml_string(const std::string& text, const std::string& origin = "<string>");
  /// Inverse of to_json; used to rebuild a run from its manifest.
  static ExperimentConfig from_json(const nlohmann::json& j);

  /// `section.key=value`; the value is parsed as a TOML value, else taken as a string.
  void set(const std::string& assignment);
  void set(const std::string& dotted_key, const std::string& value);

  double get_float(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::vector<double> get_floats(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;

  /// Applies a model shorthand such as sine2, sine4, bessel, ginibre or poisson.
  void set_model_shorthand(const std::string& name);

  std::string to_toml() const;
  nlohmann::json to_json() const;
  /// Hash of everything that affects outputs (not output_dir, run_id or workers).
  std::string fingerprint(const std::string& command) const;

  // Typed views; each validates its block.
  ModelSpec model() const;
  SamplerSpec sampler(const ModelSpec& model) const;
  SchemeParams scheme() const;
  DriftSpec drift() const;
  CorrelationOptions correlations() const;
  LadderSpec ladder(const ModelSpec& model) const;
  std::uint64_t master_seed() const;
  std::size_t replicas() const;
  int workers() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ibm::cli
