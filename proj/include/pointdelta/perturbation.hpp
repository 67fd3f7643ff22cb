#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pointdelta/basis.hpp"
#include "pointdelta/kernels.hpp"
#include "pointdelta/point.hpp"

namespace pdelta::perturbation {

using cplx = std::complex<double>;

/// Basis, puncture and the Fourier data ⟨φ_j, ω_n⟩ shared by every perturbation.
/// Immutable after construction.
class SpectralModel {
 public:
  SpectralModel(basis::SpectralBasis basis, const Point& puncture, double kappa);

  int dim() const { return basis_.dim(); }
  int size() const { return basis_.size(); }
  int rows() const { return dim() + 1; }
  double kappa() const { return kappa_; }
  const Point& puncture() const { return kernels_.puncture(); }
  const basis::SpectralBasis& basis() const { return basis_; }
  const kernels::KernelBundle& kernels() const { return kernels_; }

  const Eigen::VectorXd& mu() const { return mu_; }
  /// (d+1)×M table ⟨φ_j, ω_n⟩.
  const Eigen::MatrixXd& phi_hat() const { return phi_hat_; }
  /// ω_n(x⁰).
  const Eigen::VectorXd& omega_at_puncture() const { return omega0_; }

 private:
  basis::SpectralBasis basis_;
  kernels::KernelBundle kernels_;
  double kappa_;
  Eigen::VectorXd mu_;
  Eigen::MatrixXd phi_hat_;
  Eigen::VectorXd omega0_;
};

/// A member of K_{d+1} with finite spectral rank: C(i, n) = γ_i(K ω_n).
struct PerturbationK {
  int dim = 1;
  Eigen::MatrixXcd C;
  std::string provenance = "custom";

  int rows() const { return static_cast<int>(C.rows()); }
  int size() const { return static_cast<int>(C.cols()); }
  /// The operator B_s of the chain: conditions from rows 0..s−1, rows ≥ s zeroed.
  PerturbationK restricted(int active_rows) const;
  bool is_zero() const { return C.isZero(0.0); }
};

PerturbationK zero_perturbation(const SpectralModel& model);
/// Δ + kδ(x − x⁰): c_0 = k · G(·, x⁰), so C(0, n) = k ⟨ω_n, φ_0⟩.
PerturbationK preset_delta_coupling(double k, const SpectralModel& model);
/// K f = Σ α_i ⟨f, φ_i⟩ φ_i, so C(i, n) = α_i ⟨ω_n, φ_i⟩.
PerturbationK preset_alpha_family(std::span<const cplx> alpha, const SpectralModel& model);
/// K ω_n ∈ span{∂G/∂ξ_j}: row 0 is zero, rows 1..d are the given table.
PerturbationK preset_tangential(const SpectralModel& model, const Eigen::MatrixXcd& rows);
/// Seeded tangential preset with decaying random rows 1..d.
PerturbationK preset_tangential(const SpectralModel& model, std::uint64_t seed);

struct DeterminantEval {
  cplx lambda;
  cplx value;
  Eigen::MatrixXcd B;  ///< B(i, j) = β_ij(λ)
  double trunc_err;    ///< |Δ_M(λ) − Δ_{M/2}(λ)|
};

/// A field in coefficient form: Σ regular_n ω_n + Σ singular_j φ_j.
struct SpectralField {
  Eigen::VectorXcd regular;
  Eigen::VectorXcd singular;
};

/// Pointwise value of a coefficient field.
cplx evaluate(const SpectralModel& model, const SpectralField& field, const Point& x);
/// Fourier coefficients ⟨field, ω_n⟩, n ≤ M.
Eigen::VectorXcd fourier_coefficients(const SpectralModel& model, const SpectralField& field);

/// B_K for one K over one model; all spectral quantities are finite sums over n ≤ M.
class PerturbedOperator {
 public:
  PerturbedOperator(const SpectralModel& model, PerturbationK K);

  const SpectralModel& model() const { return *model_; }
  const PerturbationK& perturbation() const { return K_; }

  /// β_ij(λ) using the first `terms` eigenpairs (all when negative).
  Eigen::MatrixXcd beta_matrix(cplx lambda, int terms = -1) const;
  cplx determinant(cplx lambda, int terms = -1) const;
  DeterminantEval characteristic_determinant(cplx lambda) const;
  cplx delta01(cplx lambda) const;

  /// b_i(f) = γ_i(K B0 (B0 − λ)^{-1} f) for f given by Fourier coefficients.
  Eigen::VectorXcd functional_vector(const Eigen::VectorXcd& f_hat, cplx lambda) const;
  /// (B_K − λ)^{-1} f as a coefficient field (direct solve of the (d+1)-system).
  SpectralField resolvent_field(const Eigen::VectorXcd& f_hat, cplx lambda) const;
  /// (B_K − λ)^{-1} f (x) = (B0 − λ)^{-1} f (x) + Q(f, x, λ)/Δ(λ), Q the bordered determinant.
  cplx resolvent_apply(const Eigen::VectorXcd& f_hat, cplx lambda, const Point& x) const;
  /// Bordered determinant Q(f, x, λ).
  cplx bordered_determinant(const Eigen::VectorXcd& f_hat, cplx lambda, const Point& x) const;
  /// P_j(x) = B0 (B0 − λ)^{-1} φ_j (x).
  Eigen::VectorXcd resolved_kernels(cplx lambda, const Point& x) const;
  /// ⟨((B_K − λ)^{-1} − (B0 − λ)^{-1}) f, ω_m⟩, m ≤ M.
  Eigen::VectorXcd resolvent_difference_coefficients(const Eigen::VectorXcd& f_hat, cplx lambda) const;
  /// Resolvent of B_s through the rank-one recursion over s = 1..stage.
  SpectralField resolvent_chain(const SpectralField& f, cplx lambda, int stage) const;

  cplx trace_difference(cplx lambda) const;
  double krein_residual(cplx lambda, double h) const;

  /// Residue matrix of B at the eigenvalue group containing index n.
  Eigen::MatrixXcd residue_matrix(double mu) const;

 private:
  void check_pole(cplx lambda) const;
  Eigen::MatrixXcd system_matrix(cplx lambda) const;

  const SpectralModel* model_;
  PerturbationK K_;
  // weight(i, j, n) = μ_n ⟨φ_j, ω_n⟩ C(i, n), stored per (i, j) as rows.
  Eigen::MatrixXcd weights_;
  Eigen::VectorXi active_;  // 1 where some C(i, n) ≠ 0
};

/// Convenience wrappers named after the operations they perform.
cplx beta_ij(const SpectralModel& model, const PerturbationK& K, int i, int j, cplx lambda);
DeterminantEval characteristic_determinant(const SpectralModel& model, const PerturbationK& K, cplx lambda);
cplx delta01(const SpectralModel& model, const PerturbationK& K, cplx lambda);
cplx trace_difference(const SpectralModel& model, const PerturbationK& K, cplx lambda);
double krein_residual(const SpectralModel& model, const PerturbationK& K, cplx lambda, double h);

}  // namespace pdelta::perturbation
