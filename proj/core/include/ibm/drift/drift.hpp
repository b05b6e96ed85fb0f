#pragma once

#include <span>
#include <string>
#include <vector>

#include "ibm/core/configuration.hpp"
#include "ibm/core/cutoff.hpp"
#include "ibm/drift/neighbors.hpp"
#include "ibm/pointfields/model.hpp"

namespace ibm {

/// Which neighbours enter a truncated sum: |x - y| < r, or |y| < r.
enum class Truncation { kRelative, kAbsolute };

/// Ginibre has two drift representations: the pairwise sum over |x - y| < r,
/// and -x plus the sum over |y| < r.
enum class GinibreVariant { kShifted, kConfined };

std::string to_string(GinibreVariant v);
GinibreVariant ginibre_variant_from_string(const std::string& s);

/// (beta/2) sum_{|x-y|<r} 1/(x-y). Throws CollisionError on a coincident neighbour.
Point drift_sine(double beta, const Point& x, const Configuration& neighbors, double r);

/// alpha/(2x) + sum_{|x-y|<r} 1/(x-y). Throws DomainError for x <= 0.
double drift_bessel(double alpha, double x, const Configuration& neighbors, double r);

Point drift_ginibre(const Point& x, const Configuration& neighbors, double r, GinibreVariant variant);

/// (beta/2) (sum_i chi_s(x-y_i) upsilon_p(x-y_i) f(x-y_i) - rho_s) with f = -grad Psi.
Point drift_pair(const PairPotential& potential, double beta, const Point& x, const Configuration& neighbors,
                 double s, double p, double rho_s = 0.0);

/// chi_r(x) varpi_{a_+}(rest) b_{s,p}(x, rest); `rest` excludes x itself.
Point cutoff_drift(const CutoffParams& params, const ModelSpec& model, const Point& x, const Configuration& rest,
                   GinibreVariant variant = GinibreVariant::kShifted);

enum class DriftMode { kTruncated, kCutoff };

struct DriftSpec {
  DriftMode mode = DriftMode::kTruncated;
  /// Truncation radius in kTruncated mode.
  double radius = 16.0;
  /// Used in kCutoff mode.
  CutoffParams cutoff;
  GinibreVariant variant = GinibreVariant::kShifted;
};

/// Drift of a model, evaluated for every particle of a snapshot.
class DriftField {
 public:
  DriftField(ModelSpec model, DriftSpec spec);

  struct Snapshot {
    std::vector<Point> pos;
    NeighborIndex index;
    std::vector<double> sorted_moduli;
    std::vector<std::size_t> rank;  // position of particle i in sorted_moduli
  };

  Snapshot prepare(std::span<const Point> positions) const;
  /// Drift on particle i against every other particle of the snapshot.
  Point at(const Snapshot& snap, std::size_t i) const;
  /// Drift at x against `rest` (x not included).
  Point at(const Point& x, const Configuration& rest) const;

  const ModelSpec& model() const { return model_; }
  const DriftSpec& spec() const { return spec_; }
  /// Neighbour search radius.
  double reach() const;

 private:
  Point truncated(const Snapshot& snap, std::size_t i) const;
  Point smoothed(const Snapshot& snap, std::size_t i) const;

  ModelSpec model_;
  DriftSpec spec_;
  ShellBounds a_plus_;
};

}  // namespace ibm
