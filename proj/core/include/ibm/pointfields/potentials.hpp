#pragma once

#include <limits>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "ibm/core/point.hpp"

namespace ibm {

enum class Smoothness { kCompactC3, kSmoothOffOrigin };

/// Radially symmetric pair potential Psi with its gradient.
///
/// Besides Psi and grad Psi, a potential exposes the regularity data used
/// to truncate exterior sums: a decreasing bound psi(t) with
/// Psi(x) >= -psi(|x|) everywhere and Psi(x) <= psi(|x|) for |x| >= R0.
class PairPotential {
 public:
  virtual ~PairPotential() = default;

  virtual double value(const Point& x) const = 0;
  virtual Point gradient(const Point& x) const = 0;
  virtual double tail_bound(double t) const = 0;
  virtual double regular_radius() const = 0;
  /// Smallest radius beyond which |Psi| <= tol; +inf for long-range potentials.
  virtual double range(double tol) const = 0;
  virtual Smoothness smoothness() const = 0;
  virtual std::string name() const = 0;
  virtual nlohmann::json to_json() const = 0;
};

using PotentialPtr = std::shared_ptr<const PairPotential>;

class ZeroPotential final : public PairPotential {
 public:
  double value(const Point&) const override { return 0.0; }
  Point gradient(const Point& x) const override { return Point::zero(x.dim()); }
  double tail_bound(double) const override { return 0.0; }
  double regular_radius() const override { return 0.0; }
  double range(double) const override { return 0.0; }
  Smoothness smoothness() const override { return Smoothness::kCompactC3; }
  std::string name() const override { return "zero"; }
  nlohmann::json to_json() const override { return {{"type", "zero"}}; }
};

/// eps * (1 - |x|^2/sigma^2)^4 inside |x| < sigma, zero outside. C^3, compact support.
class BumpPotential final : public PairPotential {
 public:
  BumpPotential(double eps, double sigma);
  double value(const Point& x) const override;
  Point gradient(const Point& x) const override;
  double tail_bound(double t) const override;
  double regular_radius() const override { return sigma_; }
  double range(double) const override { return sigma_; }
  Smoothness smoothness() const override { return Smoothness::kCompactC3; }
  std::string name() const override;
  nlohmann::json to_json() const override;
  double eps() const { return eps_; }
  double sigma() const { return sigma_; }

 private:
  double eps_, sigma_;
};

/// eps * (sigma/|x|)^n, n > d. Smooth off the origin, +inf at 0.
class InversePowerPotential final : public PairPotential {
 public:
  InversePowerPotential(double eps, double sigma, int n);
  double value(const Point& x) const override;
  Point gradient(const Point& x) const override;
  double tail_bound(double t) const override;
  double regular_radius() const override { return 0.0; }
  double range(double tol) const override;
  Smoothness smoothness() const override { return Smoothness::kSmoothOffOrigin; }
  std::string name() const override;
  nlohmann::json to_json() const override;

 private:
  double eps_, sigma_;
  int n_;
};

/// -log|x|. The interaction behind sine, Bessel and Ginibre; not Ruelle-regular.
class LogPotential final : public PairPotential {
 public:
  double value(const Point& x) const override;
  Point gradient(const Point& x) const override;
  double tail_bound(double) const override { return std::numeric_limits<double>::infinity(); }
  double regular_radius() const override { return std::numeric_limits<double>::infinity(); }
  double range(double) const override { return std::numeric_limits<double>::infinity(); }
  Smoothness smoothness() const override { return Smoothness::kSmoothOffOrigin; }
  std::string name() const override { return "log"; }
  nlohmann::json to_json() const override { return {{"type", "log"}}; }
};

/// Builds a potential from {"type": ..., params}. Throws ConfigError on unknown types.
PotentialPtr potential_from_json(const nlohmann::json& j);

}  // namespace ibm
