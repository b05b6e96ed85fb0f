#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "ibm/core/configuration.hpp"
#include "ibm/pointfields/model.hpp"

namespace ibm {

/// Energy of m interior points in S_R against each other and against a
/// frozen exterior. Exterior points farther than R + max(R0, range(tol))
/// from the origin are dropped.
class GibbsEnergy {
 public:
  GibbsEnergy(const ModelSpec& model, double R, const Configuration& exterior, double tail_tol = 1e-10);

  /// Energy of x against interior points (skipping index `skip`) and the exterior.
  double local(const Point& x, const std::vector<Point>& interior, std::size_t skip) const;
  double total(const std::vector<Point>& interior) const;
  const std::vector<Point>& exterior() const { return exterior_; }

 private:
  PotentialPtr psi_;
  std::vector<Point> exterior_;
};

/// min(1, exp(-beta (e_prop - e_cur))), with +inf energies handled.
double metropolis_acceptance(double e_cur, double e_prop, double beta);

/// Transition matrix of the Metropolis chain on a finite state space with
/// symmetric proposal matrix q (rows sum to at most 1; the rest stays put).
Eigen::MatrixXd mh_transition_matrix(const std::vector<double>& energies, double beta, const Eigen::MatrixXd& q);

struct GibbsOptions {
  int sweeps = 200;
  /// Random-walk proposal scale; half the proposals are uniform in the ball.
  double step = 0.5;
  int init_retries = 100;
  double tail_tol = 1e-10;
};

/// Metropolis sampler of the DLR density exp(-beta (H + exterior)) on S_R^m.
/// Returns the m interior points followed by the frozen exterior.
Configuration sample_gibbs(const ModelSpec& model, double R, const Configuration& exterior, int m,
                           std::uint64_t seed, const GibbsOptions& opt = {});

}  // namespace ibm
