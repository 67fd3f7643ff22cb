#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pointdelta/point.hpp"

// Brute-force validators. Nothing here depends on the perturbation or solver modules.
namespace pdelta::oracle {

struct OracleReport {
  std::string quantity;
  double main_value = 0.0;
  double oracle_value = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
  std::string method;
};

OracleReport make_report(std::string quantity, double main_value, double oracle_value, std::string method);

/// Eigenvalues of u'' = λu on (0, 1), u(0) = u(1) = 0, with the interface
/// condition u'(x⁰+) − u'(x⁰−) = k u(x⁰). Roots of
///   s sin s + k sin(s x⁰) sin(s(1 − x⁰)),  λ = −s²,
/// and of the hyperbolic analogue for λ = t² > 0. Sorted by λ descending.
std::vector<double> delta_well_spectrum_1d(double k, double x0, int count);

/// Eigenvalues of the second-difference matrix on N interior nodes with the
/// delta lumped as k/h onto the node nearest x⁰, sorted descending.
std::vector<double> fd_eigenvalues_1d(int N, double k, double x0, int count);

struct FdSpectrum {
  std::vector<double> eigenvalues;  ///< Richardson values (4λ_fine − λ_coarse)/3
  std::vector<double> error_bar;    ///< |λ_R − λ_fine|
  int coarse_nodes = 0;
  int fine_nodes = 0;
};

/// Two-grid Richardson over h and h/2 (N and 2N + 1 interior nodes).
FdSpectrum fd_discretize_1d(int N, double k, double x0, int count);

struct Integral {
  double value = 0.0;
  double err = 0.0;
};

/// ∫_{Ω ∖ B_δ(x⁰)} f g dx with δ → 0 extrapolation over δ_k = δ0 2^{−k}.
/// d = 1 uses composite Gauss on both sides; d = 3 spherical coordinates about x⁰.
Integral volume_inner_product(const std::function<double(const Point&)>& f,
                              const std::function<double(const Point&)>& g, const Point& x0, int order = 32,
                              double delta0 = 1e-3, int levels = 5);

struct KappaVerdict {
  double kappa = 0.0;          ///< 1 or 2, 0 when no candidate fits everywhere
  bool consistent = false;
  std::vector<double> ratios;  ///< ⟨G(·,x⁰), ω_n⟩ μ_n / ω_n(x⁰), first order then second
  std::vector<int> orders;
};

/// Decides the constant in ⟨G(·, x⁰), ω_n⟩ = κ ω_n(x⁰)/μ_n on the interval for
/// n = 1..nmax at two quadrature orders.
KappaVerdict kappa_verdict(double x0 = 0.3, int nmax = 10, int order_a = 24, int order_b = 40, double tol = 1e-6);

/// Singular values of [D u_1, ..., D u_s] for random unit vectors u_k, where D is
/// a black-box linear map on coefficient vectors of length `size`.
std::vector<double> rank_probe(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply, int size,
                               int samples, std::uint64_t seed);

}  // namespace pdelta::oracle
