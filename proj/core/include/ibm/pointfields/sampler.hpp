#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "ibm/core/configuration.hpp"
#include "ibm/pointfields/dpp.hpp"
#include "ibm/pointfields/gibbs.hpp"
#include "ibm/pointfields/model.hpp"
#include "ibm/pointfields/window.hpp"

namespace ibm {

struct SamplerSpec {
  /// auto | dpp | ginibre | gaussian-ensemble | gibbs | poisson
  std::string method = "auto";
  /// Radius of the sampling window: [-w, w] in d = 1 ([0, w] for Bessel), the disc of radius w in d = 2.
  double window = 20.0;
  int grid_size = 0;    // dpp; 0 = default
  int matrix_size = 0;  // ginibre and gaussian-ensemble; 0 = default
  int gibbs_particles = -1;  // -1 = round(intensity * volume)
  GibbsOptions gibbs;

  nlohmann::json to_json() const;
};

Window sampler_window(const ModelSpec& model, double radius);

/// Equilibrium sampler for a model; expensive set-up (Nystrom spectra) is done once.
class ModelSampler {
 public:
  ModelSampler(ModelSpec model, SamplerSpec spec);
  ~ModelSampler();
  ModelSampler(ModelSampler&&) noexcept;
  ModelSampler& operator=(ModelSampler&&) noexcept;

  Configuration sample(std::uint64_t seed) const;

  const std::string& method() const { return method_; }
  const Window& window() const { return window_; }
  const ModelSpec& model() const { return model_; }

 private:
  ModelSpec model_;
  SamplerSpec spec_;
  std::string method_;
  Window window_;
  std::unique_ptr<DppSampler> dpp_;
};

}  // namespace ibm
