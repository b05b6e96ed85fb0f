#pragma once

#include <array>
#include <cmath>
#include <span>

namespace ibm {

/// A point (or displacement) in R^d for d in {1, 2}.
///
/// The unused second coordinate of a 1-d point is kept at zero so that
/// norms and arithmetic are dimension agnostic.
class Point {
 public:
  static constexpr int kMaxDim = 2;

  constexpr Point() = default;
  constexpr explicit Point(double x) : c_{x, 0.0}, dim_{1} {}
  constexpr Point(double x, double y) : c_{x, y}, dim_{2} {}

  static constexpr Point zero(int dim) { return dim == 2 ? Point(0.0, 0.0) : Point(0.0); }

  /// Builds a point from coordinates, rejecting bad dimensions and non-finite values.
  static Point checked(std::span<const double> coords);

  constexpr int dim() const { return dim_; }
  constexpr double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  constexpr double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  constexpr double x() const { return c_[0]; }
  constexpr double y() const { return c_[1]; }

  constexpr double norm2() const { return c_[0] * c_[0] + c_[1] * c_[1]; }
  double norm() const { return dim_ == 1 ? std::abs(c_[0]) : std::hypot(c_[0], c_[1]); }
  bool is_finite() const { return std::isfinite(c_[0]) && std::isfinite(c_[1]); }

  constexpr Point& operator+=(const Point& o) {
    c_[0] += o.c_[0];
    c_[1] += o.c_[1];
    return *this;
  }
  constexpr Point& operator-=(const Point& o) {
    c_[0] -= o.c_[0];
    c_[1] -= o.c_[1];
    return *this;
  }
  constexpr Point& operator*=(double a) {
    c_[0] *= a;
    c_[1] *= a;
    return *this;
  }

  friend constexpr Point operator+(Point a, const Point& b) { return a += b; }
  friend constexpr Point operator-(Point a, const Point& b) { return a -= b; }
  friend constexpr Point operator*(Point a, double s) { return a *= s; }
  friend constexpr Point operator*(double s, Point a) { return a *= s; }
  friend constexpr Point operator-(Point a) { return a *= -1.0; }
  friend constexpr bool operator==(const Point& a, const Point& b) {
    return a.dim_ == b.dim_ && a.c_ == b.c_;
  }

  friend constexpr double dot(const Point& a, const Point& b) {
    return a.c_[0] * b.c_[0] + a.c_[1] * b.c_[1];
  }

 private:
  std::array<double, 2> c_{0.0, 0.0};
  int dim_ = 1;
};

/// Lexicographic order on coordinates.
constexpr bool lex_less(const Point& a, const Point& b) {
  if (a[0] != b[0]) return a[0] < b[0];
  return a[1] < b[1];
}

inline double distance(const Point& a, const Point& b) { return (a - b).norm(); }

}  // namespace ibm
