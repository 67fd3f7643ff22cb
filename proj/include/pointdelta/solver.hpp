#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pointdelta/gamma.hpp"
#include "pointdelta/kernels.hpp"
#include "pointdelta/perturbation.hpp"
#include "pointdelta/point.hpp"

namespace pdelta::solver {

using cplx = std::complex<double>;
using Source = std::function<double(const Point&)>;

struct SolveOptions {
  int radial_order = 24;  ///< Gauss points per radial panel (d = 3) or per panel (d = 1)
  int sphere_order = 16;  ///< directions of the d = 3 angular rule
  int panels = 4;         ///< panels per subinterval (d = 1)
  double tol = 1e-9;      ///< agreement required between the two refinement levels
};

struct SolveResult {
  double value = 0.0;
  double err = 0.0;  ///< difference between the two refinement levels
  bool converged = false;
};

/// w(x) = ∫_Ω G(x, ξ) f(ξ) dξ. d = 1 splits [0, 1] at x; d = 3 integrates in
/// spherical coordinates centered at x so that ρ² absorbs the 1/ρ singularity.
SolveResult dirichlet_solve(const Source& f, const Point& x, const SolveOptions& opts = {});

/// Boundary-value solution u = ∫Gf + Σ g_j φ_j (g in trace coordinates).
/// Throws KernelSingularity at x = x⁰ and QuadratureNotConverged when the
/// refinement levels disagree.
double bm_solve(const Source& f, std::span<const double> targets, const kernels::KernelBundle& kernels,
                const Point& x, const SolveOptions& opts = {});

/// The same solution as a callable field, for feeding the γ functionals.
gamma::Field bm_field(const Source& f, std::vector<double> targets, const kernels::KernelBundle& kernels,
                      const SolveOptions& opts = {});

/// bm_solve for f = Σ f̂_n ω_n, whose volume part is Σ f̂_n ω_n/μ_n; the field
/// carries an analytic gradient.
gamma::Field bm_field(const perturbation::SpectralModel& model, Eigen::VectorXd f_hat, std::vector<double> targets);

/// Solution of B_K u = f for f given by Fourier coefficients: the regular part is
/// Σ f̂_n ω_n/μ_n and the singular coefficients are γ_i(K f) = Σ_n C_in f̂_n.
perturbation::SpectralField bk_solve(const perturbation::SpectralModel& model, const perturbation::PerturbationK& K,
                                     const Eigen::VectorXcd& f_hat);
cplx bk_solve(const perturbation::SpectralModel& model, const perturbation::PerturbationK& K,
              const Eigen::VectorXcd& f_hat, const Point& x);

/// h = h_0 + Σ c_j φ_j with h_0 expanded in the basis.
struct DecomposedField {
  Eigen::VectorXd regular;
  std::vector<double> singular;
  std::vector<double> singular_err;
  double projection_residual = 0.0;  ///< ‖h_0‖² − Σ ĥ_0n² (Bessel defect)
};

/// c = Γ_1(h) from the γ functionals, then h − Σ c_j φ_j projected onto the basis.
DecomposedField decompose(const gamma::Field& h, const perturbation::SpectralModel& model,
                          const gamma::GammaOptions& gopts = {});
double assemble(const DecomposedField& parts, const perturbation::SpectralModel& model, const Point& x);

/// ∫_Ω f g dx for the interval (split at x⁰) or the ball (product rule); used
/// by `decompose` for the projection.
double volume_integral(const Source& f, int dim, const Point& x0, int radial_order = 40, int sphere_order = 24);

}  // namespace pdelta::solver
