#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pointdelta/point.hpp"

namespace pdelta::gamma {

/// A real scalar field given as a black box; the gradient is optional and, when
/// present, replaces finite differences for normal derivatives and β_i.
struct Field {
  std::function<double(const Point&)> value;
  std::function<std::array<double, 3>(const Point&)> gradient{};
};

struct GammaOptions {
  int order = 24;        ///< Gauss points in cos θ (2·order trapezoid points in φ)
  double delta0 = 0.1;   ///< largest radius of the schedule
  int levels = 7;        ///< radii δ_k = δ0 · 2^{−k}, k < levels
};

/// Radii δ0 · 2^{−k}, k = 0..levels−1.
std::vector<double> geometric_schedule(double delta0, int levels);

/// The surface functional γ_j at a single radius δ around x⁰:
///   j = 0: −∮ ∂h/∂ν dS,  j ≥ 1: d · ∮ (x⁰_j − t_j)/|t − x⁰| · h dS.
/// In d = 1 the "sphere" is the point pair x⁰ ± δ.
double surface_gamma(const Field& h, int j, const Point& x0, double delta, int order = 24);

struct GammaLimit {
  double value;
  double err;
};

/// δ → 0+ limit of surface_gamma by Richardson extrapolation over a strictly
/// decreasing geometric schedule. Throws GammaNotStable when increments grow.
GammaLimit gamma_limit(const Field& h, int j, const Point& x0, std::span<const double> radii,
                       int order = 24);

struct GammaVector {
  std::vector<double> values;
  std::vector<double> err;
};

/// The raw functionals (γ_0, ..., γ_d); for G(·, x⁰) this is (−1, 0, ..., 0).
GammaVector raw_gamma_vector(const Field& h, const Point& x0, const GammaOptions& opts = {});

/// Boundary trace Γ_1(h): the coefficients c of h = h_0 + Σ c_i φ_i, i.e. the raw
/// functionals with the sign of entry 0 flipped (γ_0(G) = −1 in raw form).
GammaVector gamma_vector(const Field& h, const Point& x0, const GammaOptions& opts = {});

/// Γ_1 from raw functionals.
GammaVector to_trace_coordinates(GammaVector raw);

struct BetaVector {
  std::vector<double> values;
};

/// β_0 = v0(x⁰), β_i = ∂v0/∂x_i(x⁰) (analytic gradient when supplied, else a central
/// difference with step 1e−5).
BetaVector beta_vector(const Field& v0, const Point& x0);

/// A field in decomposed form: trace coordinates Γ_1 and regular-part values Γ_2.
struct DecomposedParts {
  std::vector<std::complex<double>> gamma;
  std::vector<std::complex<double>> beta;
};

/// J(w, v) = Σ γ_i(w) conj β_i(v) − Σ β_i(w) conj γ_i(v).
std::complex<double> boundary_form(const DecomposedParts& w, const DecomposedParts& v);

}  // namespace pdelta::gamma
