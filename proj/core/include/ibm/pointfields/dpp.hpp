#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ibm/core/configuration.hpp"
#include "ibm/pointfields/model.hpp"
#include "ibm/pointfields/window.hpp"

namespace ibm {

/// Spectral (HKPV) sampler for a determinantal model restricted to a window.
///
/// The kernel is discretised by Nystrom on a quadrature grid; eigenpairs
/// are computed once and shared by every sample. Each sample keeps
/// eigenfunction j with probability lambda_j and then draws points one at a
/// time from the projection kernel, by rejection against a uniform proposal.
class DppSampler {
 public:
  /// grid_size <= 0 picks a default from the expected point count.
  DppSampler(const ModelSpec& model, const Window& window, int grid_size = 0, double tol = 1e-8);
  ~DppSampler();
  DppSampler(DppSampler&&) noexcept;
  DppSampler& operator=(DppSampler&&) noexcept;

  Configuration sample(std::uint64_t seed) const;

  /// Sum of the discretised eigenvalues (= trace of the windowed kernel).
  double expected_count() const;
  /// Sum of lambda (1 - lambda).
  double count_variance() const;
  const std::vector<double>& eigenvalues() const;
  int grid_size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper around DppSampler.
Configuration sample_dpp(const ModelSpec& model, const Window& window, int grid_size, std::uint64_t seed);

/// Integral of K(x, x) over the window by adaptive quadrature.
double kernel_trace(const ModelSpec& model, const Window& window);

}  // namespace ibm
