#include "ibm/pointfields/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ibm/errors.hpp"
#include "ibm/pointfields/kernels.hpp"

namespace ibm {

ModelSpec ModelSpec::sine(double beta) {
  if (beta != 1.0 && beta != 2.0 && beta != 4.0) {
    std::ostringstream os;
    os << "sine model: beta=" << beta << " is not supported; supported beta in {1,2,4}";
    throw UnsupportedModel(os.str());
  }
  ModelSpec m;
  m.kind = ModelKind::kSineBeta;
  m.beta = beta;
  m.dim = 1;
  m.intensity_const = 1.0;
  m.potential = std::make_shared<LogPotential>();
  return m;
}

ModelSpec ModelSpec::bessel(double alpha) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    throw UnsupportedModel("Bessel model requires 1 <= alpha < inf");
  }
  ModelSpec m;
  m.kind = ModelKind::kBessel;
  m.beta = 2.0;
  m.alpha = alpha;
  m.dim = 1;
  m.intensity_const = 0.0;
  m.potential = std::make_shared<LogPotential>();
  return m;
}

ModelSpec ModelSpec::ginibre() {
  ModelSpec m;
  m.kind = ModelKind::kGinibre;
  m.beta = 2.0;
  m.dim = 2;
  m.intensity_const = 1.0 / std::numbers::pi;
  m.potential = std::make_shared<LogPotential>();
  return m;
}

ModelSpec ModelSpec::ruelle(PotentialPtr potential, double beta, double intensity, int dim) {
  if (!potential) throw InvalidParameter("Ruelle model needs a pair potential");
  if (!(beta > 0.0)) throw InvalidParameter("Ruelle model: beta must be positive");
  if (!(intensity > 0.0)) throw InvalidParameter("Ruelle model: intensity must be positive");
  if (dim != 1 && dim != 2) throw InvalidParameter("Ruelle model: dim must be 1 or 2");
  if (std::isinf(potential->regular_radius())) {
    throw UnsupportedModel("Ruelle model: potential " + potential->name() + " is not Ruelle-regular");
  }
  ModelSpec m;
  m.kind = ModelKind::kRuellePair;
  m.beta = beta;
  m.dim = dim;
  m.intensity_const = intensity;
  m.potential = std::move(potential);
  return m;
}

ModelSpec ModelSpec::poisson(double intensity, int dim) {
  return ruelle(std::make_shared<ZeroPotential>(), 1.0, intensity, dim);
}

double ModelSpec::intensity(const Point& x) const {
  if (kind == ModelKind::kBessel) {
    if (x[0] < 0.0) return 0.0;
    return kernel_eval(*this, x, x).real();
  }
  return intensity_const;
}

bool ModelSpec::is_determinantal() const {
  return kind == ModelKind::kBessel || kind == ModelKind::kGinibre ||
         (kind == ModelKind::kSineBeta && beta == 2.0);
}

bool ModelSpec::is_free() const {
  return kind == ModelKind::kRuellePair && potential && potential->name() == "zero";
}

std::string ModelSpec::id() const {
  std::ostringstream os;
  switch (kind) {
    case ModelKind::kSineBeta:
      os << "sine" << beta;
      break;
    case ModelKind::kBessel:
      os << "bessel(alpha=" << alpha << ")";
      break;
    case ModelKind::kGinibre:
      os << "ginibre";
      break;
    case ModelKind::kRuellePair:
      if (is_free()) {
        os << "poisson(d=" << dim << ",intensity=" << intensity_const << ")";
      } else {
        os << "ruelle(" << potential->name() << ",beta=" << beta << ",d=" << dim
           << ",intensity=" << intensity_const << ")";
      }
      break;
  }
  return os.str();
}

nlohmann::json ModelSpec::to_json() const {
  nlohmann::json j;
  switch (kind) {
    case ModelKind::kSineBeta:
      j = {{"kind", "sine"}, {"beta", beta}};
      break;
    case ModelKind::kBessel:
      j = {{"kind", "bessel"}, {"alpha", alpha}};
      break;
    case ModelKind::kGinibre:
      j = {{"kind", "ginibre"}};
      break;
    case ModelKind::kRuellePair:
      j = {{"kind", is_free() ? "poisson" : "ruelle"},
           {"beta", beta},
           {"dim", dim},
           {"intensity", intensity_const},
           {"potential", potential->to_json()}};
      break;
  }
  j["id"] = id();
  return j;
}

ModelSpec ModelSpec::from_json(const nlohmann::json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "sine") return sine(j.value("beta", 2.0));
    if (kind == "bessel") return bessel(j.value("alpha", 1.0));
    if (kind == "ginibre") return ginibre();
    if (kind == "poisson") return poisson(j.value("intensity", 1.0), j.value("dim", 1));
    if (kind == "ruelle") {
      return ruelle(potential_from_json(j.at("potential")), j.value("beta", 1.0),
                    j.value("intensity", 1.0), j.value("dim", 1));
    }
    throw ConfigError("unknown model kind \"" + kind + "\"");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

}  // namespace ibm
