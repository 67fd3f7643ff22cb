#include "pointdelta/kernels.hpp"

#include <cmath>

namespace pdelta::kernels {

namespace {

void require_ball(const Point& p) {
  if (p.dim != 3) throw NumericalError(ErrorKind::InvalidArgument, "ball kernel needs a 3-d point");
}

// Y² written without the image point: |ξ|²|x − ξ/|ξ|²|² = 1 − 2x·ξ + |x|²|ξ|².
// At ξ = 0 this is the removable limit Y = 1.
double image_distance2(const Point& x, const Point& xi) {
  return 1.0 - 2.0 * dot(x, xi) + x.norm2() * xi.norm2();
}

}  // namespace

XYZ xyz_quantities(const Point& x, const Point& xi) {
  require_ball(x);
  require_ball(xi);
  const double r2 = xi.norm2();
  if (r2 == 0.0) throw NumericalError(ErrorKind::ImagePointUndefined, "image point undefined for xi = 0");
  Point image = xi;
  for (int i = 0; i < 3; ++i) image[i] /= r2;
  return XYZ{distance2(x, xi), r2 * distance2(x, image), (1.0 - x.norm2()) * (1.0 - r2)};
}

double fundamental_solution(const Point& x, const Point& xi) {
  require_ball(x);
  const double r = distance(x, xi);
  if (r == 0.0) throw NumericalError(ErrorKind::KernelSingularity, "kernel singularity at x = xi");
  return kFundamentalConstant3 / r;
}

double green_ball(const Point& x, const Point& xi) {
  require_ball(x);
  require_ball(xi);
  const double r = distance(x, xi);
  if (r == 0.0) throw NumericalError(ErrorKind::KernelSingularity, "kernel singularity at x = xi");
  const double y = xi.norm() < kImageLimitRadius ? 1.0 : std::sqrt(image_distance2(x, xi));
  return kFundamentalConstant3 * (1.0 / r - 1.0 / y);
}

double green_ball_source_derivative(const Point& x, const Point& xi, int s) {
  require_ball(x);
  if (s < 1 || s > 3) throw NumericalError(ErrorKind::InvalidArgument, "source index out of range");
  const double r2 = distance2(x, xi);
  if (r2 == 0.0) throw NumericalError(ErrorKind::KernelSingularity, "kernel singularity at x = xi");
  const int i = s - 1;
  const double r3 = r2 * std::sqrt(r2);
  const double y2 = image_distance2(x, xi);
  const double y3 = y2 * std::sqrt(y2);
  // ∂(1/X)/∂ξ_s = (x_s − ξ_s)/X³, ∂(1/Y)/∂ξ_s = (x_s − |x|² ξ_s)/Y³
  return kFundamentalConstant3 * ((x[i] - xi[i]) / r3 - (x[i] - x.norm2() * xi[i]) / y3);
}

std::array<double, 3> green_ball_field_gradient(const Point& x, const Point& xi) {
  const double r2 = distance2(x, xi);
  if (r2 == 0.0) throw NumericalError(ErrorKind::KernelSingularity, "kernel singularity at x = xi");
  const double r3 = r2 * std::sqrt(r2);
  const double y2 = image_distance2(x, xi);
  const double y3 = y2 * std::sqrt(y2);
  const double xi2 = xi.norm2();
  std::array<double, 3> g{};
  for (int i = 0; i < 3; ++i) {
    // ∂(1/X)/∂x_i = −(x_i − ξ_i)/X³, ∂(1/Y)/∂x_i = −(|ξ|² x_i − ξ_i)/Y³
    g[static_cast<std::size_t>(i)] =
        kFundamentalConstant3 * (-(x[i] - xi[i]) / r3 + (xi2 * x[i] - xi[i]) / y3);
  }
  return g;
}

double green_interval(double x, double t) { return x <= t ? -x * (1.0 - t) : -t * (1.0 - x); }

double green_interval_source_derivative(double x, double t) { return x <= t ? x : x - 1.0; }

double green_interval_field_derivative(double x, double t) { return x <= t ? -(1.0 - t) : t; }

KernelBundle::KernelBundle(const Point& puncture) : puncture_(puncture) {
  require_dimension(puncture.dim);
  const double r = puncture.dim == 1 ? std::abs(puncture[0] - 0.5) * 2.0 : puncture.norm();
  if (!(r < 1.0)) throw NumericalError(ErrorKind::InvalidArgument, "puncture must be interior");
}

double KernelBundle::green(const Point& x) const {
  if (dim() == 1) return green_interval(x[0], puncture_[0]);
  return green_ball(x, puncture_);
}

double KernelBundle::green_source_gradient(const Point& x, int s) const {
  if (s < 1 || s > dim()) throw NumericalError(ErrorKind::InvalidArgument, "source index out of range");
  if (dim() == 1) {
    if (x[0] == puncture_[0])
      throw NumericalError(ErrorKind::KernelSingularity, "kernel singularity at x = x0");
    return green_interval_source_derivative(x[0], puncture_[0]);
  }
  return green_ball_source_derivative(x, puncture_, s);
}

double KernelBundle::phi(int j, const Point& x) const {
  return j == 0 ? green(x) : green_source_gradient(x, j);
}

std::array<double, 3> KernelBundle::phi_gradient(int j, const Point& x) const {
  if (dim() == 1) {
    const double t = puncture_[0];
    if (j == 0) return {green_interval_field_derivative(x[0], t), 0.0, 0.0};
    return {1.0, 0.0, 0.0};
  }
  if (j == 0) return green_ball_field_gradient(x, puncture_);
  // ∂²G/∂x_i∂ξ_s, differentiated from the closed form of ∂G/∂ξ_s.
  const int s = j - 1;
  const double r2 = distance2(x, puncture_);
  if (r2 == 0.0) throw NumericalError(ErrorKind::KernelSingularity, "kernel singularity at x = x0");
  const double r = std::sqrt(r2);
  const double y2 = 1.0 - 2.0 * dot(x, puncture_) + x.norm2() * puncture_.norm2();
  const double y = std::sqrt(y2);
  const double xn2 = x.norm2();
  const double p2 = puncture_.norm2();
  std::array<double, 3> g{};
  for (int i = 0; i < 3; ++i) {
    const double d = x[i] - puncture_[i];
    const double ds = x[s] - puncture_[s];
    const double direct = ((i == s ? 1.0 : 0.0) - 3.0 * ds * d / r2) / (r2 * r);
    // a = x_s − |x|² ξ_s, ∂a/∂x_i = δ_is − 2 x_i ξ_s; ∂Y²/∂x_i = 2(|ξ|² x_i − ξ_i)
    const double a = x[s] - xn2 * puncture_[s];
    const double da = (i == s ? 1.0 : 0.0) - 2.0 * x[i] * puncture_[s];
    const double dy2 = 2.0 * (p2 * x[i] - puncture_[i]);
    const double image = da / (y2 * y) - 1.5 * a * dy2 / (y2 * y2 * y);
    g[static_cast<std::size_t>(i)] = kFundamentalConstant3 * (direct - image);
  }
  return g;
}

}  // namespace pdelta::kernels
