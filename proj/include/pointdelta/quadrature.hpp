#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace pdelta::quad {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss–Legendre rule on [-1, 1]; cached per n.
const Rule1D& gauss_legendre(int n);

/// ∫_a^b f with n-point Gauss–Legendre on `panels` equal panels.
double integrate(const std::function<double(double)>& f, double a, double b, int n, int panels = 1);

/// Product rule on the unit sphere: Gauss–Legendre in cos θ times the trapezoid rule in φ.
struct SphereRule {
  std::vector<std::array<double, 3>> directions;
  std::vector<double> weights;  ///< sum to 4π
};

/// `order` Gauss points in cos θ and 2·order trapezoid points in φ.
const SphereRule& sphere_rule(int order);

/// Richardson extrapolation of values sampled at h_k = h_0 · 2^{−k}, assuming an
/// error expansion in integer powers h, h², ... starting at `first_power`.
struct Extrapolated {
  double value;
  double error;
  /// Successive raw increments |v_{k+1} − v_k|.
  std::vector<double> increments;
};
Extrapolated richardson(std::span<const double> values, int first_power = 1, int max_order = 4);

}  // namespace pdelta::quad
