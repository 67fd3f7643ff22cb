#pragma once

#include <array>
#include <numbers>

#include "pointdelta/point.hpp"

// Green kernels of the Dirichlet Laplacian, normalized so that Δ_x G(x, ξ) = δ(x − ξ).
namespace pdelta::kernels {

/// Area of the unit sphere in R^3.
inline constexpr double kSphereArea3 = 4.0 * std::numbers::pi;
/// C_3 = −1 / ((d − 2) σ_d) for d = 3.
inline constexpr double kFundamentalConstant3 = -1.0 / kSphereArea3;

/// |ξ| below which the image term is replaced by its limit.
inline constexpr double kImageLimitRadius = 1e-8;

struct XYZ {
  double x2;  ///< |x − ξ|²
  double y2;  ///< |ξ|² · |x − ξ/|ξ|²|²
  double z2;  ///< (1 − |x|²)(1 − |ξ|²)
};

/// Throws ImagePointUndefined for ξ = 0.
XYZ xyz_quantities(const Point& x, const Point& xi);

/// ε(x, ξ) = −1 / (4π |x − ξ|).
double fundamental_solution(const Point& x, const Point& xi);

/// Dirichlet Green function of the unit ball, C_3 (1/X − 1/Y).
double green_ball(const Point& x, const Point& xi);

/// ∂G(x, ξ)/∂ξ_s, s in 1..3.
double green_ball_source_derivative(const Point& x, const Point& xi, int s);

/// Gradient of G(·, ξ) in its first argument.
std::array<double, 3> green_ball_field_gradient(const Point& x, const Point& xi);

/// Dirichlet Green function of (0, 1): −x(1 − t) for x ≤ t, −t(1 − x) for x > t.
double green_interval(double x, double t);
/// ∂G(x, t)/∂t.
double green_interval_source_derivative(double x, double t);
/// ∂G(x, t)/∂x.
double green_interval_field_derivative(double x, double t);

/// The kernel family attached to one puncture x⁰: φ_0 = G(·, x⁰), φ_s = ∂G(·, x⁰)/∂ξ_s.
class KernelBundle {
 public:
  explicit KernelBundle(const Point& puncture);

  int dim() const { return puncture_.dim; }
  const Point& puncture() const { return puncture_; }
  int singular_count() const { return dim() + 1; }

  double green(const Point& x) const;
  /// φ_s(x) for s in 1..d; throws KernelSingularity at x = x⁰.
  double green_source_gradient(const Point& x, int s) const;
  /// φ_j(x) for j in 0..d.
  double phi(int j, const Point& x) const;
  /// ∇_x φ_j(x).
  std::array<double, 3> phi_gradient(int j, const Point& x) const;

 private:
  Point puncture_;
};

}  // namespace pdelta::kernels
