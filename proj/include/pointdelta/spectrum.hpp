#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "pointdelta/perturbation.hpp"

namespace pdelta::spectrum {

using cplx = std::complex<double>;

struct Eigenvalue {
  cplx lambda;
  int multiplicity = 1;
  std::string flag;  ///< empty, or "root-pole collision; refine M"
};

/// Eigenvalues of B_K in a window. `roots` are zeros of Δ off the pole set;
/// `retained` are unperturbed μ that survive, i.e. m0(μ) + ord_μ Δ > 0.
struct SpectrumResult {
  std::vector<Eigenvalue> roots;
  std::vector<Eigenvalue> retained;
  std::vector<std::string> warnings;

  /// Roots and retained values merged, sorted by real part descending.
  std::vector<Eigenvalue> merged() const;
};

struct SpectrumOptions {
  double tol = 1e-13;          ///< relative tolerance of root refinement
  int samples_per_gap = 10;
  bool complex_search = false;
  double imag_max = 0.0;       ///< half-height of the complex search band (0: window length)
};

/// Winding number of Δ around a closed polyline; sides refined until the
/// argument increment per step is below π/4.
int winding_number(const std::function<cplx(cplx)>& f, const std::vector<cplx>& polygon);

/// Order of a zero (positive) or pole (negative) of Δ at a real point from the
/// scaling of |Δ| on two shifted samples.
int local_order(const std::function<cplx(cplx)>& f, double at, double scale);

SpectrumResult perturbed_spectrum(const perturbation::PerturbedOperator& op, double lo, double hi,
                                  const SpectrumOptions& opts = {});

/// One eigenvalue followed through the cutoffs M, 2M, 4M.
struct CutoffExtrapolation {
  double value = 0.0;       ///< extrapolated eigenvalue
  double finest = 0.0;      ///< the 4M value
  double correction = 0.0;  ///< value − finest
  double order = 0.0;       ///< observed convergence order in M (0: already converged)
};

/// Richardson extrapolation in the cutoff. `levels` holds three equally long
/// eigenvalue lists (same ordering) computed at M, 2M and 4M; the order is
/// estimated from the two successive differences of each eigenvalue.
std::vector<CutoffExtrapolation> extrapolate_cutoff(const std::vector<std::vector<double>>& levels);

struct Theorem52Report {
  int N = 0;                  ///< 1-based basis index
  double mu_N = 0.0;
  std::string branch;         ///< "node", "C0N=0" or "generic"
  double nearest = 0.0;       ///< eigenvalue of B_1 closest to μ_N
  double deviation = 0.0;     ///< |nearest − μ_N|
  double eigvec_coefficient = 0.0;  ///< |μ_N C_0N / Δ_01(μ_N)|
  bool holds = false;         ///< deviation ≤ tol in the node and C0N=0 branches, > 1e-4 otherwise
};

/// Locates the eigenvalue of B_1 = K restricted to row 0 near μ_N.
Theorem52Report theorem52_check(const perturbation::SpectralModel& model, const perturbation::PerturbationK& K,
                                int N, double tol = 1e-9);

}  // namespace pdelta::spectrum
