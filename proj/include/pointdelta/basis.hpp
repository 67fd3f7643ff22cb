#pragma once

#include <array>
#include <vector>

#include "pointdelta/point.hpp"

namespace pdelta::basis {

inline constexpr int kMaxBesselOrder = 25;
inline constexpr int kMaxBesselZero = 200;

/// The n-th positive zero of the spherical Bessel function j_l.
/// Throws ZeroTableExhausted outside l ≤ 25, n ≤ 200.
double bessel_zero(int l, int n);

/// Real spherical harmonic Y_lm(θ, φ), orthonormal on S².
double real_spherical_harmonic(int l, int m, double theta, double phi);

/// One Dirichlet eigenpair Δω = μω, μ < 0.
/// d = 1: ω = √2 sin(nπx), (l, m) unused. d = 3: ω = N j_l(z r) Y_lm, μ = −z².
struct Eigenpair {
  int index = 0;
  double mu = 0.0;
  int l = 0;
  int m = 0;
  int n = 1;
  double wavenumber = 0.0;  ///< √(−μ)
  double norm = 1.0;        ///< N for d = 3
};

Eigenpair interval_eigenpair(int n);
Eigenpair ball_eigenpair(int l, int m, int n);

double eigenfunction_value(int dim, const Eigenpair& e, const Point& x);
std::array<double, 3> eigenfunction_gradient(int dim, const Eigenpair& e, const Point& x);

/// The first M Dirichlet eigenpairs of the interval or the unit ball, sorted by |μ|
/// with ties broken by (l, m, n). Immutable after construction.
class SpectralBasis {
 public:
  SpectralBasis(int dim, int cutoff);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(entries_.size()); }
  const Eigenpair& operator[](int k) const { return entries_[static_cast<std::size_t>(k)]; }
  const std::vector<Eigenpair>& entries() const { return entries_; }
  double mu(int k) const { return entries_[static_cast<std::size_t>(k)].mu; }

  double value(int k, const Point& x) const { return eigenfunction_value(dim_, (*this)[k], x); }
  std::array<double, 3> gradient(int k, const Point& x) const {
    return eigenfunction_gradient(dim_, (*this)[k], x);
  }

 private:
  int dim_;
  std::vector<Eigenpair> entries_;
};

inline SpectralBasis enumerate_basis(int dim, int cutoff) { return SpectralBasis(dim, cutoff); }

/// ⟨φ_j, ω_k⟩ = κ · ω_k(x⁰)/μ_k for j = 0 and κ · ∂_j ω_k(x⁰)/μ_k for j ≥ 1.
double phi_fourier_coefficient(const SpectralBasis& basis, const Point& x0, int j, int k, double kappa);

}  // namespace pdelta::basis
