#include "ibm/pointfields/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ibm/errors.hpp"
#include "ibm/pointfields/window.hpp"

namespace ibm {

GibbsEnergy::GibbsEnergy(const ModelSpec& model, double R, const Configuration& exterior, double tail_tol)
    : psi_(model.potential) {
  if (model.kind != ModelKind::kRuellePair || !psi_) throw UnsupportedModel("sample_gibbs needs a Ruelle pair model");
  if (!(R > 0.0)) throw InvalidParameter("sample_gibbs: R must be positive");
  const double reach = R + std::max(psi_->regular_radius(), psi_->range(tail_tol));
  for (std::size_t i = 0; i < exterior.size(); ++i) {
    const Point& s = exterior.point(i);
    if (s.dim() != model.dim) throw InvalidParameter("sample_gibbs: exterior dimension mismatch");
    if (s.norm() <= R) throw InvalidParameter("sample_gibbs: exterior point inside S_R");
    if (s.norm() <= reach) exterior_.push_back(s);
  }
}

double GibbsEnergy::local(const Point& x, const std::vector<Point>& interior, std::size_t skip) const {
  double e = 0.0;
  for (std::size_t j = 0; j < interior.size(); ++j) {
    if (j != skip) e += psi_->value(x - interior[j]);
  }
  for (const auto& s : exterior_) e += psi_->value(x - s);
  return e;
}

double GibbsEnergy::total(const std::vector<Point>& interior) const {
  double e = 0.0;
  for (std::size_t i = 0; i < interior.size(); ++i) {
    for (std::size_t j = i + 1; j < interior.size(); ++j) e += psi_->value(interior[i] - interior[j]);
    for (const auto& s : exterior_) e += psi_->value(interior[i] - s);
  }
  return e;
}

double metropolis_acceptance(double e_cur, double e_prop, double beta) {
  if (std::isinf(e_prop) && e_prop > 0.0) return 0.0;
  if (std::isinf(e_cur) && e_cur > 0.0) return 1.0;
  const double de = e_prop - e_cur;
  if (de <= 0.0) return 1.0;
  return std::exp(-beta * de);
}

Eigen::MatrixXd mh_transition_matrix(const std::vector<double>& energies, double beta, const Eigen::MatrixXd& q) {
  const auto n = static_cast<Eigen::Index>(energies.size());
  if (q.rows() != n || q.cols() != n) throw InvalidParameter("proposal matrix size mismatch");
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double stay = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      p(i, j) = q(i, j) * metropolis_acceptance(energies[static_cast<std::size_t>(i)],
                                                energies[static_cast<std::size_t>(j)], beta);
      stay -= p(i, j);
    }
    p(i, i) = stay;
  }
  return p;
}

Configuration sample_gibbs(const ModelSpec& model, double R, const Configuration& exterior, int m,
                           std::uint64_t seed, const GibbsOptions& opt) {
  if (m < 0) throw InvalidParameter("sample_gibbs: m must be nonnegative");
  if (opt.sweeps < 0) throw InvalidParameter("sample_gibbs: sweeps must be nonnegative");
  const GibbsEnergy energy(model, R, exterior, opt.tail_tol);
  const Ball ball{R, model.dim};
  Rng rng(seed, 0);
  const auto mm = static_cast<std::size_t>(m);

  std::vector<Point> x;
  bool ok = false;
  for (int attempt = 0; attempt <= opt.init_retries && !ok; ++attempt) {
    x.clear();
    for (std::size_t i = 0; i < mm; ++i) x.push_back(uniform_in_window(ball, rng));
    ok = std::isfinite(energy.total(x));
  }
  if (!ok) {
    throw InitFailure("sample_gibbs: no finite-energy initial state after " + std::to_string(opt.init_retries) +
                      " retries (seed " + std::to_string(seed) + ")");
  }

  for (int sweep = 0; sweep < opt.sweeps; ++sweep) {
    for (std::size_t i = 0; i < mm; ++i) {
      Point y;
      if (rng.uniform() < 0.5) {
        y = uniform_in_window(ball, rng);
      } else {
        y = x[i];
        for (int k = 0; k < model.dim; ++k) y[k] += opt.step * rng.normal();
        if (y.norm() > R) continue;  // zero target density: reject
      }
      const double a = metropolis_acceptance(energy.local(x[i], x, i), energy.local(y, x, i), model.beta);
      if (rng.uniform() < a) x[i] = y;
    }
  }

  Configuration out(model.dim, R);
  for (const auto& p : x) out.add(p);
  for (std::size_t i = 0; i < exterior.size(); ++i) out.add(exterior.point(i), true);
  return out;
}

}  // namespace ibm
