#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <nlohmann/json.hpp>

#include "ibm/core/configuration.hpp"
#include "ibm/drift/drift.hpp"
#include "ibm/dynamics/path_io.hpp"
#include "ibm/dynamics/scheme.hpp"
#include "ibm/pointfields/model.hpp"

namespace ibm {

/// Mutable state of one run; particles are kept sorted by label.
struct SimState {
  std::int64_t step = 0;
  std::int64_t next_label = 1;
  std::vector<Particle> particles;

  std::size_t moving_count() const;
};

using ProgressFn = std::function<void(std::int64_t step, std::int64_t total)>;

/// Euler-Maruyama integrator for the three finite-volume schemes.
///
/// Gaussian increments are addressed by (seed, label, step), so runs of
/// different schemes started from the same labeled configuration with the
/// same seed share their Brownian noise particle by particle. A retried step
/// refines the same Brownian path by bisection instead of redrawing it.
class Integrator {
 public:
  Integrator(ModelSpec model, SchemeParams params, std::uint64_t seed);

  /// Labels `init` by modulus; points outside S_R or marked frozen stay frozen.
  SimState init(const Configuration& init) const;
  /// Empty record with header fields and the time-0 frame.
  PathRecord start(const SimState& state) const;

  /// One step of length dt, with collision retries. Appends events to `rec`.
  void step(SimState& state, PathRecord& rec) const;

  /// Steps until `stop_step` (or the end), recording frames at the stride.
  void run_until(SimState& state, PathRecord& rec, std::int64_t stop_step, const ProgressFn& progress = {}) const;
  PathRecord run(const Configuration& init, const ProgressFn& progress = {}) const;

  /// Brownian increment of `label` over substep k of 2^level within `step`.
  Point increment(std::int64_t label, std::int64_t step, int level, int k) const;

  const SchemeParams& params() const { return params_; }
  const ModelSpec& model() const { return model_; }
  std::uint64_t seed() const { return seed_; }

  /// Checkpoint: state plus the partial record, doubles encoded exactly.
  nlohmann::json checkpoint(const SimState& state, const PathRecord& rec) const;
  void restore(const nlohmann::json& j, SimState& state, PathRecord& rec) const;

 private:
  bool attempt(SimState& state, std::vector<PathEvent>& events, int level) const;
  void births(SimState& state, std::vector<PathEvent>& events) const;
  bool ordered_ok(const std::vector<Particle>& before, const std::vector<Particle>& after) const;
  bool separated(const std::vector<Particle>& ps) const;
  void record(const SimState& state, PathRecord& rec) const;

  ModelSpec model_;
  SchemeParams params_;
  std::uint64_t seed_;
  DriftField field_;
  bool check_order_;
  /// Log-gas pairs closer than this would be kicked apart too far even at the finest retry level.
  double gap_floor_;
};

PathRecord simulate_lower(const Configuration& init, const ModelSpec& model, SchemeParams scheme, std::uint64_t seed);
PathRecord simulate_upper(const Configuration& init, const ModelSpec& model, SchemeParams scheme, std::uint64_t seed);
/// All particles inside S_R (R = R_big) diffuse; leavers freeze.
PathRecord simulate_reference(const Configuration& init, const ModelSpec& model, SchemeParams scheme,
                              std::uint64_t seed);

}  // namespace ibm
