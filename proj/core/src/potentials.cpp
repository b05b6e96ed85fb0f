#include "ibm/pointfields/potentials.hpp"

#include <cmath>
#include <sstream>

#include "ibm/errors.hpp"

namespace ibm {

BumpPotential::BumpPotential(double eps, double sigma) : eps_(eps), sigma_(sigma) {
  if (!std::isfinite(eps)) throw InvalidParameter("bump: eps must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidParameter("bump: sigma must be positive");
}

double BumpPotential::value(const Point& x) const {
  const double u = x.norm2() / (sigma_ * sigma_);
  if (u >= 1.0) return 0.0;
  const double v = 1.0 - u;
  return eps_ * v * v * v * v;
}

Point BumpPotential::gradient(const Point& x) const {
  const double u = x.norm2() / (sigma_ * sigma_);
  if (u >= 1.0) return Point::zero(x.dim());
  const double v = 1.0 - u;
  // d/dx eps (1 - |x|^2/s^2)^4 = -8 eps (1 - u)^3 x / s^2
  return x * (-8.0 * eps_ * v * v * v / (sigma_ * sigma_));
}

double BumpPotential::tail_bound(double t) const {
  // |Psi| <= |eps| on [0, sigma), zero beyond: a decreasing majorant.
  return t < sigma_ ? std::fabs(eps_) : 0.0;
}

std::string BumpPotential::name() const {
  std::ostringstream os;
  os << "bump(eps=" << eps_ << ",sigma=" << sigma_ << ")";
  return os.str();
}

nlohmann::json BumpPotential::to_json() const {
  return {{"type", "bump"}, {"eps", eps_}, {"sigma", sigma_}};
}

InversePowerPotential::InversePowerPotential(double eps, double sigma, int n)
    : eps_(eps), sigma_(sigma), n_(n) {
  if (!(eps > 0.0)) throw InvalidParameter("inverse-power: eps must be positive");
  if (!(sigma > 0.0)) throw InvalidParameter("inverse-power: sigma must be positive");
  if (n < 3) throw InvalidParameter("inverse-power: exponent must be at least 3");
}

double InversePowerPotential::value(const Point& x) const {
  const double r = x.norm();
  if (r == 0.0) return std::numeric_limits<double>::infinity();
  return eps_ * std::pow(sigma_ / r, n_);
}

Point InversePowerPotential::gradient(const Point& x) const {
  const double r2 = x.norm2();
  if (r2 == 0.0) return Point::zero(x.dim());
  const double r = std::sqrt(r2);
  return x * (-n_ * eps_ * std::pow(sigma_ / r, n_) / r2);
}

double InversePowerPotential::tail_bound(double t) const {
  if (t <= 0.0) return std::numeric_limits<double>::infinity();
  return eps_ * std::pow(sigma_ / t, n_);
}

double InversePowerPotential::range(double tol) const {
  if (!(tol > 0.0)) return std::numeric_limits<double>::infinity();
  return sigma_ * std::pow(eps_ / tol, 1.0 / n_);
}

std::string InversePowerPotential::name() const {
  std::ostringstream os;
  os << "inverse_power(eps=" << eps_ << ",sigma=" << sigma_ << ",n=" << n_ << ")";
  return os.str();
}

nlohmann::json InversePowerPotential::to_json() const {
  return {{"type", "inverse_power"}, {"eps", eps_}, {"sigma", sigma_}, {"n", n_}};
}

double LogPotential::value(const Point& x) const {
  const double r = x.norm();
  if (r == 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(r);
}

Point LogPotential::gradient(const Point& x) const {
  const double r2 = x.norm2();
  if (r2 == 0.0) return Point::zero(x.dim());
  return x * (-1.0 / r2);
}

PotentialPtr potential_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type")) throw ConfigError("potential: missing \"type\"");
  const auto type = j.at("type").get<std::string>();
  try {
    if (type == "zero") return std::make_shared<ZeroPotential>();
    if (type == "log") return std::make_shared<LogPotential>();
    if (type == "bump") {
      return std::make_shared<BumpPotential>(j.value("eps", 1.0), j.value("sigma", 1.0));
    }
    if (type == "inverse_power") {
      return std::make_shared<InversePowerPotential>(j.value("eps", 1.0), j.value("sigma", 1.0),
                                                     j.value("n", 12));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
  throw ConfigError("unknown potential type \"" + type + "\" (expected zero, bump, inverse_power, log)");
}

}  // namespace ibm
