#include "ibm/drift/drift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ibm/errors.hpp"

namespace ibm {

std::string to_string(GinibreVariant v) { return v == GinibreVariant::kShifted ? "shifted" : "confined"; }

GinibreVariant ginibre_variant_from_string(const std::string& s) {
  if (s == "shifted" || s == "c") return GinibreVariant::kShifted;
  if (s == "confined" || s == "d") return GinibreVariant::kConfined;
  throw ConfigError("unknown Ginibre drift variant \"" + s + "\" (expected shifted or confined)");
}

namespace {

// z / |z|^2: minus the gradient of -log|z|.
inline Point log_force(const Point& z) { return z * (1.0 / z.norm2()); }

[[noreturn]] void collide(const Point& x) {
  throw CollisionError("coincident particles at distance 0 (x[0]=" + std::to_string(x[0]) + ")");
}

bool singular(const ModelSpec& m) {
  return m.kind != ModelKind::kRuellePair || m.potential->smoothness() == Smoothness::kSmoothOffOrigin;
}

Point pair_force(const ModelSpec& m, const Point& z) {
  if (m.kind == ModelKind::kRuellePair) return -m.potential->gradient(z);
  return log_force(z);
}

}  // namespace

Point drift_sine(double beta, const Point& x, const Configuration& neighbors, double r) {
  if (x.dim() != 1 || neighbors.dim() != 1) throw InvalidParameter("drift_sine is one-dimensional");
  double sum = 0.0;
  for (const auto& y : neighbors.points()) {
    const double z = x[0] - y[0];
    if (z == 0.0) collide(x);
    if (std::fabs(z) < r) sum += 1.0 / z;
  }
  return Point(0.5 * beta * sum);
}

double drift_bessel(double alpha, double x, const Configuration& neighbors, double r) {
  if (!(x > 0.0)) throw DomainError("drift_bessel: x must be positive, got " + std::to_string(x));
  double sum = alpha / (2.0 * x);
  for (const auto& y : neighbors.points()) {
    const double z = x - y[0];
    if (z == 0.0) collide(Point(x));
    if (std::fabs(z) < r) sum += 1.0 / z;
  }
  return sum;
}

Point drift_ginibre(const Point& x, const Configuration& neighbors, double r, GinibreVariant variant) {
  if (x.dim() != 2 || neighbors.dim() != 2) throw InvalidParameter("drift_ginibre is two-dimensional");
  Point sum = variant == GinibreVariant::kConfined ? -x : Point(0.0, 0.0);
  for (const auto& y : neighbors.points()) {
    const Point z = x - y;
    if (z.norm2() == 0.0) collide(x);
    const double test = variant == GinibreVariant::kShifted ? z.norm() : y.norm();
    if (test < r) sum += log_force(z);
  }
  return sum;
}

Point drift_pair(const PairPotential& potential, double beta, const Point& x, const Configuration& neighbors,
                 double s, double p, double rho_s) {
  Point sum = Point::zero(x.dim());
  for (const auto& y : neighbors.points()) {
    const Point z = x - y;
    const double d = z.norm();
    const double w = chi(s, d) * upsilon(p, d);
    if (w == 0.0) continue;
    sum += -potential.gradient(z) * w;
  }
  if (rho_s != 0.0) {
    if (x.dim() != 1) throw InvalidParameter("a nonzero rho_s is supported in d = 1 only");
    sum[0] -= rho_s;
  }
  return sum * (0.5 * beta);
}

Point cutoff_drift(const CutoffParams& params, const ModelSpec& model, const Point& x, const Configuration& rest,
                   GinibreVariant variant) {
  DriftSpec spec;
  spec.mode = DriftMode::kCutoff;
  spec.cutoff = params;
  spec.variant = variant;
  return DriftField(model, spec).at(x, rest);
}

DriftField::DriftField(ModelSpec model, DriftSpec spec) : model_(std::move(model)), spec_(std::move(spec)) {
  if (spec_.mode == DriftMode::kTruncated) {
    if (!(spec_.radius > 0.0)) throw InvalidParameter("drift truncation radius must be positive");
  } else {
    spec_.cutoff.validate();
    if (spec_.cutoff.rho_s != 0.0 && model_.dim != 1) {
      throw InvalidParameter("a nonzero rho_s is supported in d = 1 only");
    }
    a_plus_ = spec_.cutoff.a.plus();
  }
  if (model_.kind == ModelKind::kSineBeta && model_.dim != 1) throw InvalidParameter("sine model is one-dimensional");
}

double DriftField::reach() const {
  return spec_.mode == DriftMode::kTruncated ? spec_.radius : spec_.cutoff.s;
}

DriftField::Snapshot DriftField::prepare(std::span<const Point> positions) const {
  Snapshot s;
  s.pos.assign(positions.begin(), positions.end());
  s.index = NeighborIndex(s.pos, std::max(1.0, reach() / 4.0));
  if (spec_.mode == DriftMode::kCutoff) {
    const std::size_t n = s.pos.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> mod(n);
    for (std::size_t i = 0; i < n; ++i) mod[i] = s.pos[i].norm();
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mod[a] < mod[b]; });
    s.sorted_moduli.resize(n);
    s.rank.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      s.sorted_moduli[k] = mod[order[k]];
      s.rank[order[k]] = k;
    }
  }
  return s;
}

Point DriftField::at(const Snapshot& snap, std::size_t i) const {
  return spec_.mode == DriftMode::kTruncated ? truncated(snap, i) : smoothed(snap, i);
}

Point DriftField::at(const Point& x, const Configuration& rest) const {
  std::vector<Point> pos(rest.points());
  pos.push_back(x);
  const auto snap = prepare(pos);
  return at(snap, pos.size() - 1);
}

Point DriftField::truncated(const Snapshot& snap, std::size_t i) const {
  const Point& x = snap.pos[i];
  const double r = spec_.radius;
  const bool sing = singular(model_);
  const double c = 0.5 * model_.beta;
  Point sum = Point::zero(x.dim());
  if (model_.kind == ModelKind::kBessel) {
    if (!(x[0] > 0.0)) throw DomainError("Bessel drift: x must be positive, got " + std::to_string(x[0]));
    sum[0] += model_.alpha / (2.0 * x[0]);
  }
  if (model_.kind == ModelKind::kGinibre && spec_.variant == GinibreVariant::kConfined) {
    sum -= x;
    snap.index.for_each_near(Point::zero(2), r, [&](std::size_t j) {
      if (j == i) return;
      const Point& y = snap.pos[j];
      if (!(y.norm() < r)) return;
      const Point z = x - y;
      if (z.norm2() == 0.0) collide(x);
      sum += log_force(z);
    });
    return sum;
  }
  Point pair = Point::zero(x.dim());
  snap.index.for_each_near(x, r, [&](std::size_t j) {
    if (j == i) return;
    const Point z = x - snap.pos[j];
    const double d2 = z.norm2();
    if (d2 == 0.0) {
      if (sing) collide(x);
      return;
    }
    if (!(d2 < r * r)) return;
    pair += pair_force(model_, z);
  });
  return sum + pair * c;
}

Point DriftField::smoothed(const Snapshot& snap, std::size_t i) const {
  const auto& cp = spec_.cutoff;
  const Point& x = snap.pos[i];
  const Point zero = Point::zero(x.dim());
  const double wx = chi(cp.r, x);
  if (wx == 0.0) return zero;
  const double wc = theta(distance_to_compact_sorted(a_plus_, snap.sorted_moduli, snap.rank[i]));
  if (wc == 0.0) return zero;

  const double c = 0.5 * model_.beta;
  Point one_body = zero;
  Point pair = zero;
  const bool confined = model_.kind == ModelKind::kGinibre && spec_.variant == GinibreVariant::kConfined;
  if (model_.kind == ModelKind::kBessel) {
    const double u = upsilon(cp.p, std::fabs(x[0]));
    if (u > 0.0) one_body[0] += u * model_.alpha / (2.0 * x[0]);
  }
  if (confined) {
    one_body -= x;
    snap.index.for_each_near(zero, cp.s, [&](std::size_t j) {
      if (j == i) return;
      const Point& y = snap.pos[j];
      const double w = chi(cp.s, y);
      if (w == 0.0) return;
      const Point z = x - y;
      const double u = upsilon(cp.p, z);
      if (u == 0.0) return;
      pair += log_force(z) * (w * u);
    });
  } else {
    snap.index.for_each_near(x, cp.s, [&](std::size_t j) {
      if (j == i) return;
      const Point z = x - snap.pos[j];
      const double d = z.norm();
      const double w = chi(cp.s, d) * upsilon(cp.p, d);
      if (w == 0.0) return;
      pair += pair_force(model_, z) * w;
    });
  }
  if (cp.rho_s != 0.0) pair[0] -= cp.rho_s;
  return (one_body + pair * c) * (wx * wc);
}

}  // namespace ibm
