#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "ibm/core/point.hpp"
#include "ibm/pointfields/potentials.hpp"

namespace ibm {

enum class ModelKind { kSineBeta, kBessel, kGinibre, kRuellePair };

/// Which equilibrium field, with its parameters. Build through the factories,
/// which enforce the supported parameter ranges.
struct ModelSpec {
  ModelKind kind = ModelKind::kSineBeta;
  double beta = 2.0;
  double alpha = 0.0;
  int dim = 1;
  /// Constant intensity for sine (1), Ginibre (1/pi) and Ruelle models
  /// (a user-supplied estimate, used for shell bounds and births).
  double intensity_const = 1.0;
  PotentialPtr potential;

  static ModelSpec sine(double beta);
  static ModelSpec bessel(double alpha);
  static ModelSpec ginibre();
  static ModelSpec ruelle(PotentialPtr potential, double beta, double intensity, int dim);
  /// Ideal gas: zero potential.
  static ModelSpec poisson(double intensity, int dim);

  /// One-point correlation rho^1(x).
  double intensity(const Point& x) const;
  bool is_determinantal() const;
  /// True for the zero-potential Ruelle model.
  bool is_free() const;
  /// Stable identifier, e.g. "sine2", "bessel(alpha=1)", "ginibre".
  std::string id() const;

  nlohmann::json to_json() const;
  static ModelSpec from_json(const nlohmann::json& j);
};

}  // namespace ibm
