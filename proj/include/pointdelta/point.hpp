#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pdelta {

/// Failure categories raised by the numerical routines.
enum class ErrorKind {
  ImagePointUndefined,
  KernelSingularity,
  SphereLeavesDomain,
  GammaNotStable,
  DecompositionRequired,
  ZeroTableExhausted,
  EvaluationAtPole,
  PerturbedEigenvalue,
  ChainNotInvertible,
  QuadratureNotConverged,
  InvalidArgument,
};

class NumericalError : public std::runtime_error {
 public:
  NumericalError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A point of the unit interval (dim 1) or the unit ball (dim 3).
/// Unused trailing coordinates are kept at zero.
struct Point {
  std::array<double, 3> c{0.0, 0.0, 0.0};
  int dim = 3;

  Point() = default;
  static Point on_line(double x) { return Point{{x, 0.0, 0.0}, 1}; }
  static Point in_ball(double x, double y, double z) { return Point{{x, y, z}, 3}; }

  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

  double norm2() const { return c[0] * c[0] + c[1] * c[1] + c[2] * c[2]; }
  double norm() const { return std::sqrt(norm2()); }

 private:
  Point(std::array<double, 3> coords, int d) : c(coords), dim(d) {}
};

inline double dot(const Point& a, const Point& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double distance2(const Point& a, const Point& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

inline double distance(const Point& a, const Point& b) { return std::sqrt(distance2(a, b)); }

/// a + t * dir, keeping the dimension of `a`.
inline Point shifted(const Point& a, const std::array<double, 3>& dir, double t) {
  Point p = a;
  for (int i = 0; i < 3; ++i) p[i] += t * dir[static_cast<std::size_t>(i)];
  return p;
}

inline void require_dimension(int d) {
  if (d != 1 && d != 3)
    throw NumericalError(ErrorKind::InvalidArgument, "dimension must be 1 or 3");
}

}  // namespace pdelta
