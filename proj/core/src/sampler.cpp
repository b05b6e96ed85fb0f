#include "ibm/pointfields/sampler.hpp"

#include <cmath>

#include "ibm/errors.hpp"
#include "ibm/pointfields/gaussian_ensemble.hpp"
#include "ibm/pointfields/ginibre.hpp"

namespace ibm {

nlohmann::json SamplerSpec::to_json() const {
  return {{"method", method},
          {"window", window},
          {"grid_size", grid_size},
          {"matrix_size", matrix_size},
          {"gibbs_particles", gibbs_particles},
          {"gibbs_sweeps", gibbs.sweeps},
          {"gibbs_step", gibbs.step}};
}

Window sampler_window(const ModelSpec& model, double radius) {
  if (!(radius > 0.0)) throw InvalidParameter("sampler window must be positive");
  if (model.dim == 2) return Ball{radius, 2};
  if (model.kind == ModelKind::kBessel) return Interval{0.0, radius};
  return Interval{-radius, radius};
}

namespace {

std::string auto_method(const ModelSpec& m) {
  switch (m.kind) {
    case ModelKind::kSineBeta:
      return m.beta == 2.0 ? "dpp" : "gaussian-ensemble";
    case ModelKind::kBessel:
      return "dpp";
    case ModelKind::kGinibre:
      return "ginibre";
    case ModelKind::kRuellePair:
      return m.is_free() ? "poisson" : "gibbs";
  }
  return "dpp";
}

}  // namespace

ModelSampler::ModelSampler(ModelSpec model, SamplerSpec spec)
    : model_(std::move(model)), spec_(std::move(spec)), window_(sampler_window(model_, spec_.window)) {
  method_ = spec_.method == "auto" ? auto_method(model_) : spec_.method;
  if (method_ == "dpp") {
    dpp_ = std::make_unique<DppSampler>(model_, window_, spec_.grid_size);
  } else if (method_ == "ginibre") {
    if (model_.kind != ModelKind::kGinibre) throw ConfigError("sampler method ginibre needs the Ginibre model");
  } else if (method_ == "gaussian-ensemble") {
    if (model_.kind != ModelKind::kSineBeta) throw ConfigError("gaussian-ensemble sampling is for sine_beta");
  } else if (method_ == "gibbs" || method_ == "poisson") {
    if (model_.kind != ModelKind::kRuellePair) throw ConfigError("sampler method " + method_ + " needs a Ruelle model");
    if (method_ == "poisson" && !model_.is_free()) throw ConfigError("poisson sampling needs the zero potential");
  } else {
    throw ConfigError("unknown sampler method \"" + method_ + "\"");
  }
}

ModelSampler::~ModelSampler() = default;
ModelSampler::ModelSampler(ModelSampler&&) noexcept = default;
ModelSampler& ModelSampler::operator=(ModelSampler&&) noexcept = default;

Configuration ModelSampler::sample(std::uint64_t seed) const {
  if (dpp_) return dpp_->sample(seed);
  const double w = spec_.window;
  if (method_ == "ginibre") {
    int n = spec_.matrix_size;
    if (n <= 0) n = static_cast<int>(std::ceil(std::pow(w / 0.7, 2.0)));
    return sample_ginibre(n, w, seed);
  }
  if (method_ == "gaussian-ensemble") {
    return sample_gaussian_ensemble_bulk(model_.beta, std::get<Interval>(window_), spec_.matrix_size, seed);
  }
  if (method_ == "poisson") return sample_poisson(model_.intensity_const, window_, seed);
  int m = spec_.gibbs_particles;
  if (m < 0) m = static_cast<int>(std::lround(model_.intensity_const * window_volume(window_)));
  return sample_gibbs(model_, w, Configuration(model_.dim, 0.0), m, seed, spec_.gibbs);
}

}  // namespace ibm
