#include "ibm/pointfields/dpp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ibm/errors.hpp"
#include "ibm/pointfields/kernels.hpp"
#include "ibm/util/quadrature.hpp"

namespace ibm {

namespace {

using cplx = std::complex<double>;

struct Grid {
  std::vector<Point> nodes;
  std::vector<double> weights;
};

Grid interval_grid(const ModelSpec& model, double lo, double hi, int n) {
  Grid g;
  if (model.kind == ModelKind::kBessel) {
    // x = u^2 removes the sqrt-type behaviour of the hard-edge kernel at 0.
    const auto q = gauss_legendre(n, std::sqrt(lo), std::sqrt(hi));
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      g.nodes.emplace_back(q.nodes[i] * q.nodes[i]);
      g.weights.push_back(2.0 * q.nodes[i] * q.weights[i]);
    }
    return g;
  }
  const auto q = gauss_legendre(n, lo, hi);
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    g.nodes.emplace_back(q.nodes[i]);
    g.weights.push_back(q.weights[i]);
  }
  return g;
}

Grid disc_grid(double radius, int n_total) {
  const int nr = std::max(8, static_cast<int>(std::ceil(std::sqrt(n_total / (2.0 * std::numbers::pi)))));
  const int nt = std::max(8, (n_total + nr - 1) / nr);
  const auto q = gauss_legendre(nr, 0.0, radius);
  Grid g;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    for (int k = 0; k < nt; ++k) {
      const double ang = 2.0 * std::numbers::pi * (k + 0.5) / nt;
      g.nodes.emplace_back(q.nodes[i] * std::cos(ang), q.nodes[i] * std::sin(ang));
      g.weights.push_back(q.weights[i] * q.nodes[i] * 2.0 * std::numbers::pi / nt);
    }
  }
  return g;
}

int default_grid(const ModelSpec& model, const Window& w, double trace) {
  if (window_dim(w) == 2) {
    const double r = enclosing_radius(w);
    const double nr = std::ceil(1.5 * r) + 10.0;
    const double nt = std::ceil(3.0 * std::numbers::pi * r) + 12.0;
    return static_cast<int>(nr * nt);
  }
  if (model.kind == ModelKind::kBessel) return static_cast<int>(std::ceil(3.0 * trace)) + 40;
  return static_cast<int>(std::ceil(2.0 * trace)) + 32;
}

}  // namespace

double kernel_trace(const ModelSpec& model, const Window& window) {
  if (!model.is_determinantal()) throw UnsupportedModel("kernel_trace: " + model.id() + " is not determinantal");
  if (window_dim(window) != model.dim) throw InvalidParameter("kernel_trace: window dimension mismatch");
  if (model.kind == ModelKind::kGinibre || (model.kind == ModelKind::kSineBeta)) {
    return model.intensity_const * window_volume(window);
  }
  double lo = 0.0, hi = 0.0;
  if (const auto* iv = std::get_if<Interval>(&window)) {
    lo = iv->lo;
    hi = iv->hi;
  } else {
    hi = std::get<Ball>(window).radius;
  }
  lo = std::max(lo, 0.0);
  if (hi <= lo) return 0.0;
  auto f = [&](double u) { return 2.0 * u * bessel_kernel(model.alpha, u * u, u * u); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, std::sqrt(lo), std::sqrt(hi), 15, 1e-13);
}

struct DppSampler::Impl {
  ModelSpec model;
  Window window;
  Grid grid;
  std::vector<double> sqrt_w;
  std::vector<double> lambda;
  Eigen::MatrixXcd psi;  // columns: eigenvectors of the weighted Nystrom matrix
  double volume = 0.0;

  Eigen::VectorXcd kernel_row(const Point& x) const {
    Eigen::VectorXcd k(static_cast<Eigen::Index>(grid.nodes.size()));
    for (std::size_t m = 0; m < grid.nodes.size(); ++m) {
      k[static_cast<Eigen::Index>(m)] = kernel_eval(model, x, grid.nodes[m]) * sqrt_w[m];
    }
    return k;
  }
};

DppSampler::DppSampler(const ModelSpec& model, const Window& window, int grid_size, double tol)
    : impl_(std::make_unique<Impl>()) {
  if (!model.is_determinantal()) {
    throw UnsupportedModel("sample_dpp: " + model.id() + " has no scalar determinantal kernel");
  }
  if (window_dim(window) != model.dim) throw InvalidParameter("sample_dpp: window dimension does not match model");
  if (!(window_volume(window) > 0.0)) throw InvalidParameter("sample_dpp: window must have positive volume");
  auto& im = *impl_;
  im.model = model;
  im.window = window;
  if (model.kind == ModelKind::kBessel) {
    const auto* iv = std::get_if<Interval>(&window);
    if (iv == nullptr || iv->lo < 0.0) throw InvalidParameter("sample_dpp: Bessel windows are intervals inside [0, inf)");
  }
  im.volume = window_volume(window);
  const int n = grid_size > 0 ? grid_size : default_grid(model, window, kernel_trace(model, window));
  if (model.dim == 2) {
    im.grid = disc_grid(std::get<Ball>(window).radius, n);
  } else if (const auto* iv = std::get_if<Interval>(&window)) {
    im.grid = interval_grid(model, iv->lo, iv->hi, n);
  } else {
    const double r = std::get<Ball>(window).radius;
    im.grid = interval_grid(model, -r, r, n);
  }
  const auto nn = static_cast<Eigen::Index>(im.grid.nodes.size());
  im.sqrt_w.resize(im.grid.weights.size());
  for (std::size_t i = 0; i < im.sqrt_w.size(); ++i) im.sqrt_w[i] = std::sqrt(im.grid.weights[i]);

  Eigen::MatrixXcd m(nn, nn);
  for (Eigen::Index i = 0; i < nn; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (Eigen::Index j = 0; j <= i; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const cplx v = kernel_eval(model, im.grid.nodes[ui], im.grid.nodes[uj]) * (im.sqrt_w[ui] * im.sqrt_w[uj]);
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success) throw KernelDiscretizationError("sample_dpp: eigensolver failed");
  im.lambda.resize(static_cast<std::size_t>(nn));
  for (Eigen::Index j = 0; j < nn; ++j) {
    double l = es.eigenvalues()[j];
    if (l < -tol || l > 1.0 + tol) {
      std::ostringstream os;
      os << "sample_dpp: Nystrom eigenvalue " << l << " outside [0,1] beyond tol " << tol
         << "; increase grid_size (now " << nn << ")";
      throw KernelDiscretizationError(os.str());
    }
    im.lambda[static_cast<std::size_t>(j)] = std::clamp(l, 0.0, 1.0);
  }
  im.psi = es.eigenvectors();
}

DppSampler::~DppSampler() = default;
DppSampler::DppSampler(DppSampler&&) noexcept = default;
DppSampler& DppSampler::operator=(DppSampler&&) noexcept = default;

double DppSampler::expected_count() const {
  double s = 0.0;
  for (double l : impl_->lambda) s += l;
  return s;
}

double DppSampler::count_variance() const {
  double s = 0.0;
  for (double l : impl_->lambda) s += l * (1.0 - l);
  return s;
}

const std::vector<double>& DppSampler::eigenvalues() const { return impl_->lambda; }

int DppSampler::grid_size() const { return static_cast<int>(impl_->grid.nodes.size()); }

Configuration DppSampler::sample(std::uint64_t seed) const {
  const auto& im = *impl_;
  Rng rng(seed, 0);
  std::vector<Eigen::Index> sel;
  for (std::size_t j = 0; j < im.lambda.size(); ++j) {
    if (rng.uniform() < im.lambda[j]) sel.push_back(static_cast<Eigen::Index>(j));
  }
  Configuration out(im.model.dim, 0.0);
  const auto k = static_cast<Eigen::Index>(sel.size());
  if (k == 0) return out;

  const auto nn = static_cast<Eigen::Index>(im.grid.nodes.size());
  // Column j maps the weighted kernel row at x to phi_j(x).
  Eigen::MatrixXcd ext(nn, k);
  for (Eigen::Index c = 0; c < k; ++c) ext.col(c) = im.psi.col(sel[static_cast<std::size_t>(c)]) / im.lambda[static_cast<std::size_t>(sel[static_cast<std::size_t>(c)])];

  double bound = 0.0;
  for (Eigen::Index m = 0; m < nn; ++m) {
    double s = 0.0;
    for (Eigen::Index c = 0; c < k; ++c) s += std::norm(im.psi(m, sel[static_cast<std::size_t>(c)]));
    bound = std::max(bound, s / im.grid.weights[static_cast<std::size_t>(m)]);
  }
  bound *= 1.5;

  for (;;) {
    std::vector<Point> pts;
    std::vector<Eigen::VectorXcd> basis;
    bool envelope_ok = true;
    while (static_cast<Eigen::Index>(pts.size()) < k && envelope_ok) {
      const Point x = uniform_in_window(im.window, rng);
      const Eigen::VectorXcd v = ext.transpose() * im.kernel_row(x);
      const double vn = v.squaredNorm();
      if (vn > bound) {
        bound = 2.0 * vn;
        envelope_ok = false;
        break;
      }
      Eigen::VectorXcd r = v;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& e : basis) r -= e.dot(r) * e;
      }
      const double rn = r.squaredNorm();
      if (rng.uniform() * bound < rn) {
        pts.push_back(x);
        basis.push_back(r / std::sqrt(rn));
      }
    }
    if (!envelope_ok) continue;
    for (const auto& p : pts) out.add(p);
    return out;
  }
}

Configuration sample_dpp(const ModelSpec& model, const Window& window, int grid_size, std::uint64_t seed) {
  return DppSampler(model, window, grid_size).sample(seed);
}

}  // namespace ibm
