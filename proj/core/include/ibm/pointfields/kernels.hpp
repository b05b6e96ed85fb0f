#pragma once

#include <complex>

#include "ibm/core/point.hpp"
#include "ibm/pointfields/model.hpp"

namespace ibm {

/// Correlation kernel K(x, y) of a determinantal model.
/// Throws UnsupportedModel for Ruelle models and sine with beta != 2.
std::complex<double> kernel_eval(const ModelSpec& model, const Point& x, const Point& y);

double sine_kernel(double x, double y);
/// Hard-edge Bessel kernel; x, y >= 0. The diagonal uses the closed-form limit.
double bessel_kernel(double alpha, double x, double y);
std::complex<double> ginibre_kernel(const Point& x, const Point& y);

/// g(x, y) = 1 - |K(x,y)|^2 / (K(x,x) K(y,y)). Throws DegenerateIntensity if a diagonal is 0.
double pair_correlation(const ModelSpec& model, const Point& x, const Point& y);

}  // namespace ibm
