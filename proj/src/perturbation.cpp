#include "pointdelta/perturbation.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace pdelta::perturbation {

namespace {

constexpr double kPoleDistance = 1e-10;
constexpr double kRoundoffZero = 1e-13;

void clean_roundoff(Eigen::MatrixXcd& m) {
  const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (std::abs(m.data()[i]) <= kRoundoffZero * scale) m.data()[i] = 0.0;
}

}  // namespace

SpectralModel::SpectralModel(basis::SpectralBasis b, const Point& puncture, double kappa)
    : basis_(std::move(b)), kernels_(puncture), kappa_(kappa) {
  if (puncture.dim != basis_.dim())
    throw NumericalError(ErrorKind::InvalidArgument, "puncture and basis dimensions differ");
  const int M = basis_.size();
  mu_.resize(M);
  omega0_.resize(M);
  phi_hat_.resize(rows(), M);
  for (int n = 0; n < M; ++n) {
    mu_(n) = basis_.mu(n);
    omega0_(n) = basis_.value(n, puncture);
    const auto grad = basis_.gradient(n, puncture);
    phi_hat_(0, n) = kappa * omega0_(n) / mu_(n);
    for (int j = 1; j < rows(); ++j) phi_hat_(j, n) = kappa * grad[static_cast<std::size_t>(j - 1)] / mu_(n);
  }
}

PerturbationK PerturbationK::restricted(int active_rows) const {
  PerturbationK out = *this;
  for (int i = active_rows; i < out.rows(); ++i) out.C.row(i).setZero();
  out.provenance = provenance + "/B" + std::to_string(active_rows);
  return out;
}

PerturbationK zero_perturbation(const SpectralModel& model) {
  return PerturbationK{model.dim(), Eigen::MatrixXcd::Zero(model.rows(), model.size()), "zero"};
}

PerturbationK preset_delta_coupling(double k, const SpectralModel& model) {
  PerturbationK K = zero_perturbation(model);
  K.C.row(0) = (k * model.phi_hat().row(0)).cast<cplx>();
  K.provenance = "delta";
  return K;
}

PerturbationK preset_alpha_family(std::span<const cplx> alpha, const SpectralModel& model) {
  if (static_cast<int>(alpha.size()) != model.rows())
    throw NumericalError(ErrorKind::InvalidArgument, "alpha needs d+1 entries");
  PerturbationK K = zero_perturbation(model);
  for (int i = 0; i < model.rows(); ++i)
    K.C.row(i) = alpha[static_cast<std::size_t>(i)] * model.phi_hat().row(i).cast<cplx>();
  K.provenance = "alpha";
  return K;
}

PerturbationK preset_tangential(const SpectralModel& model, const Eigen::MatrixXcd& rows) {
  if (rows.rows() != model.dim() || rows.cols() != model.size())
    throw NumericalError(ErrorKind::InvalidArgument, "tangential table must be d x M");
  PerturbationK K = zero_perturbation(model);
  K.C.bottomRows(model.dim()) = rows;
  K.provenance = "tangential";
  return K;
}

PerturbationK preset_tangential(const SpectralModel& model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd rows(model.dim(), model.size());
  for (int n = 0; n < model.size(); ++n) {
    const double decay = 1.0 / std::abs(model.mu()(n));
    for (int s = 0; s < model.dim(); ++s) rows(s, n) = u(rng) * decay;
  }
  return preset_tangential(model, rows);
}

cplx evaluate(const SpectralModel& model, const SpectralField& field, const Point& x) {
  cplx sum = 0.0;
  for (int n = 0; n < field.regular.size(); ++n)
    if (field.regular(n) != 0.0) sum += field.regular(n) * model.basis().value(n, x);
  for (int j = 0; j < field.singular.size(); ++j)
    if (field.singular(j) != 0.0) sum += field.singular(j) * model.kernels().phi(j, x);
  return sum;
}

Eigen::VectorXcd fourier_coefficients(const SpectralModel& model, const SpectralField& field) {
  Eigen::VectorXcd out = field.regular;
  if (out.size() == 0) out = Eigen::VectorXcd::Zero(model.size());
  for (int j = 0; j < field.singular.size(); ++j)
    out += field.singular(j) * model.phi_hat().row(j).transpose().cast<cplx>();
  return out;
}

PerturbedOperator::PerturbedOperator(const SpectralModel& model, PerturbationK K)
    : model_(&model), K_(std::move(K)) {
  if (K_.rows() != model.rows() || K_.size() != model.size())
    throw NumericalError(ErrorKind::InvalidArgument, "perturbation table does not match the basis");
  clean_roundoff(K_.C);
  const int r = model.rows(), M = model.size();
  weights_.resize(r * r, M);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int n = 0; n < M; ++n)
        weights_(i * r + j, n) = model.mu()(n) * model.phi_hat()(j, n) * K_.C(i, n);
  clean_roundoff(weights_);
  active_.resize(M);
  for (int n = 0; n < M; ++n) active_(n) = K_.C.col(n).isZero(0.0) ? 0 : 1;
}

void PerturbedOperator::check_pole(cplx lambda) const {
  const auto& mu = model_->mu();
  for (int n = 0; n < mu.size(); ++n)
    if (active_(n) && std::abs(lambda - mu(n)) < kPoleDistance)
      throw NumericalError(ErrorKind::EvaluationAtPole, "evaluation at pole");
}

Eigen::MatrixXcd PerturbedOperator::beta_matrix(cplx lambda, int terms) const {
  check_pole(lambda);
  const int r = model_->rows();
  const int M = terms < 0 ? model_->size() : std::min(terms, model_->size());
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(r * r);
  const auto& mu = model_->mu();
  for (int n = 0; n < M; ++n) {
    if (!active_(n)) continue;
    const cplx inv = 1.0 / (mu(n) - lambda);
    acc += weights_.col(n) * inv;
  }
  Eigen::MatrixXcd B(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) B(i, j) = acc(i * r + j);
  return B;
}

Eigen::MatrixXcd PerturbedOperator::system_matrix(cplx lambda) const {
  const int r = model_->rows();
  return Eigen::MatrixXcd::Identity(r, r) - lambda * beta_matrix(lambda);
}

cplx PerturbedOperator::determinant(cplx lambda, int terms) const {
  const int r = model_->rows();
  const Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(r, r) - lambda * beta_matrix(lambda, terms);
  return A.determinant();
}

DeterminantEval PerturbedOperator::characteristic_determinant(cplx lambda) const {
  DeterminantEval out;
  out.lambda = lambda;
  out.B = beta_matrix(lambda);
  const int r = model_->rows();
  out.value = (Eigen::MatrixXcd::Identity(r, r) - lambda * out.B).determinant();
  out.trunc_err = std::abs(out.value - determinant(lambda, model_->size() / 2));
  return out;
}

cplx PerturbedOperator::delta01(cplx lambda) const {
  check_pole(lambda);
  const auto& mu = model_->mu();
  const auto& w0 = model_->omega_at_puncture();
  cplx sum = 0.0;
  for (int n = 0; n < mu.size(); ++n) {
    if (!active_(n) || weights_(0, n) == 0.0) continue;
    sum += w0(n) * K_.C(0, n) / (mu(n) - lambda);
  }
  return 1.0 - model_->kappa() * lambda * sum;
}

Eigen::VectorXcd PerturbedOperator::functional_vector(const Eigen::VectorXcd& f_hat, cplx lambda) const {
  check_pole(lambda);
  const auto& mu = model_->mu();
  Eigen::VectorXcd scaled(f_hat.size());
  for (int n = 0; n < f_hat.size(); ++n)
    scaled(n) = active_(n) ? mu(n) * f_hat(n) / (mu(n) - lambda) : cplx{0.0};
  return K_.C * scaled;
}

SpectralField PerturbedOperator::resolvent_field(const Eigen::VectorXcd& f_hat, cplx lambda) const {
  const Eigen::MatrixXcd A = system_matrix(lambda);
  const cplx det = A.determinant();
  if (std::abs(det) < 1e-12)
    throw NumericalError(ErrorKind::PerturbedEigenvalue, "lambda is a perturbed eigenvalue");
  const Eigen::VectorXcd c = A.partialPivLu().solve(functional_vector(f_hat, lambda));
  const auto& mu = model_->mu();
  SpectralField out;
  out.singular = c;
  out.regular.resize(model_->size());
  const Eigen::VectorXcd mixed = model_->phi_hat().cast<cplx>().transpose() * c;
  for (int n = 0; n < model_->size(); ++n) {
    const cplx denom = mu(n) - lambda;
    if (denom == 0.0) throw NumericalError(ErrorKind::EvaluationAtPole, "evaluation at pole");
    out.regular(n) = (f_hat(n) + lambda * mixed(n)) / denom;
  }
  return out;
}

Eigen::VectorXcd PerturbedOperator::resolved_kernels(cplx lambda, const Point& x) const {
  const int r = model_->rows(), M = model_->size();
  const auto& mu = model_->mu();
  Eigen::VectorXcd p(r);
  Eigen::VectorXcd series = Eigen::VectorXcd::Zero(r);
  for (int n = 0; n < M; ++n) {
    const double w = model_->basis().value(n, x);
    const cplx f = w / (mu(n) - lambda);
    for (int j = 0; j < r; ++j) series(j) += model_->phi_hat()(j, n) * f;
  }
  for (int j = 0; j < r; ++j) p(j) = model_->kernels().phi(j, x) + lambda * series(j);
  return p;
}

cplx PerturbedOperator::bordered_determinant(const Eigen::VectorXcd& f_hat, cplx lambda, const Point& x) const {
  const int r = model_->rows();
  Eigen::MatrixXcd Bd = Eigen::MatrixXcd::Zero(r + 1, r + 1);
  Bd.topLeftCorner(r, r) = system_matrix(lambda);
  Bd.topRightCorner(r, 1) = functional_vector(f_hat, lambda);
  Bd.bottomLeftCorner(1, r) = resolved_kernels(lambda, x).transpose();
  return -Bd.determinant();
}

cplx PerturbedOperator::resolvent_apply(const Eigen::VectorXcd& f_hat, cplx lambda, const Point& x) const {
  const cplx det = system_matrix(lambda).determinant();
  if (std::abs(det) < 1e-12)
    throw NumericalError(ErrorKind::PerturbedEigenvalue, "lambda is a perturbed eigenvalue");
  const auto& mu = model_->mu();
  cplx base = 0.0;
  for (int n = 0; n < f_hat.size(); ++n)
    if (f_hat(n) != 0.0) base += f_hat(n) * model_->basis().value(n, x) / (mu(n) - lambda);
  return base + bordered_determinant(f_hat, lambda, x) / det;
}

Eigen::VectorXcd PerturbedOperator::resolvent_difference_coefficients(const Eigen::VectorXcd& f_hat,
                                                                      cplx lambda) const {
  const Eigen::MatrixXcd A = system_matrix(lambda);
  const Eigen::VectorXcd c = A.partialPivLu().solve(functional_vector(f_hat, lambda));
  const auto& mu = model_->mu();
  Eigen::VectorXcd out(model_->size());
  const Eigen::VectorXcd mixed = model_->phi_hat().cast<cplx>().transpose() * c;
  for (int m = 0; m < model_->size(); ++m) out(m) = mu(m) * mixed(m) / (mu(m) - lambda);
  return out;
}

SpectralField PerturbedOperator::resolvent_chain(const SpectralField& f, cplx lambda, int stage) const {
  const int r = model_->rows();
  if (stage < 0 || stage > r) throw NumericalError(ErrorKind::InvalidArgument, "chain stage out of range");
  const auto& mu = model_->mu();
  const auto& C = K_.C;

  auto add = [](SpectralField a, const SpectralField& b, cplx s) {
    a.regular += s * b.regular;
    a.singular += s * b.singular;
    return a;
  };
  auto kernel_field = [&](int j) {
    SpectralField phi{Eigen::VectorXcd::Zero(model_->size()), Eigen::VectorXcd::Zero(r)};
    phi.singular(j) = 1.0;
    return phi;
  };
  auto normalized = [&](SpectralField g) {
    if (g.regular.size() == 0) g.regular = Eigen::VectorXcd::Zero(model_->size());
    if (g.singular.size() == 0) g.singular = Eigen::VectorXcd::Zero(r);
    return g;
  };
  // L_i(g) = γ_i(K g) through the Fourier coefficients of g.
  auto K_functional = [&](int i, const SpectralField& g) {
    return cplx(C.row(i) * fourier_coefficients(*model_, g));
  };

  std::function<SpectralField(int, const SpectralField&)> apply = [&](int s, const SpectralField& g) {
    if (s == 0) {
      SpectralField out{Eigen::VectorXcd::Zero(model_->size()), Eigen::VectorXcd::Zero(r)};
      const Eigen::VectorXcd gh = fourier_coefficients(*model_, g);
      for (int n = 0; n < model_->size(); ++n) {
        const cplx denom = mu(n) - lambda;
        if (std::abs(denom) < kPoleDistance) throw NumericalError(ErrorKind::EvaluationAtPole, "evaluation at pole");
        out.regular(n) = gh(n) / denom;
      }
      return out;
    }
    const SpectralField prev = apply(s - 1, g);
    if (C.row(s - 1).isZero(0.0)) return prev;
    const SpectralField phi = kernel_field(s - 1);
    const SpectralField theta = add(phi, apply(s - 1, phi), lambda);
    const cplx num = K_functional(s - 1, add(g, prev, lambda));
    const cplx den = 1.0 - lambda * K_functional(s - 1, theta);
    if (std::abs(den) < 1e-12)
      throw NumericalError(ErrorKind::ChainNotInvertible, "intermediate operator not invertible at lambda");
    return add(prev, theta, num / den);
  };
  return apply(stage, normalized(f));
}

cplx PerturbedOperator::trace_difference(cplx lambda) const {
  const Eigen::MatrixXcd A = system_matrix(lambda);
  if (std::abs(A.determinant()) < 1e-12)
    throw NumericalError(ErrorKind::PerturbedEigenvalue, "lambda is a perturbed eigenvalue");
  const auto lu = A.partialPivLu();
  const auto& mu = model_->mu();
  const int r = model_->rows();
  cplx tr = 0.0;
  // Σ_m ⟨(R_K − R_0) ω_m, ω_m⟩ with b(ω_m) = μ_m C(:, m)/(μ_m − λ).
  for (int m = 0; m < model_->size(); ++m) {
    if (!active_(m)) continue;
    const cplx s = mu(m) / (mu(m) - lambda);
    const Eigen::VectorXcd c = lu.solve(K_.C.col(m) * s);
    cplx diag = 0.0;
    for (int j = 0; j < r; ++j) diag += c(j) * model_->phi_hat()(j, m) * s;
    tr += diag;
  }
  return tr;
}

double PerturbedOperator::krein_residual(cplx lambda, double h) const {
  const cplx dlog = std::log(determinant(lambda + h) / determinant(lambda - h)) / (2.0 * h);
  return std::abs(trace_difference(lambda) + dlog);
}

Eigen::MatrixXcd PerturbedOperator::residue_matrix(double mu_value) const {
  const int r = model_->rows();
  const auto& mu = model_->mu();
  Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(r, r);
  const double tol = 1e-9 * std::max(1.0, std::abs(mu_value));
  for (int n = 0; n < model_->size(); ++n) {
    if (std::abs(mu(n) - mu_value) > tol) continue;
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) R(i, j) += weights_(i * r + j, n);
  }
  return R;
}

cplx beta_ij(const SpectralModel& model, const PerturbationK& K, int i, int j, cplx lambda) {
  return PerturbedOperator(model, K).beta_matrix(lambda)(i, j);
}

DeterminantEval characteristic_determinant(const SpectralModel& model, const PerturbationK& K, cplx lambda) {
  return PerturbedOperator(model, K).characteristic_determinant(lambda);
}

cplx delta01(const SpectralModel& model, const PerturbationK& K, cplx lambda) {
  return PerturbedOperator(model, K).delta01(lambda);
}

cplx trace_difference(const SpectralModel& model, const PerturbationK& K, cplx lambda) {
  return PerturbedOperator(model, K).trace_difference(lambda);
}

double krein_residual(const SpectralModel& model, const PerturbationK& K, cplx lambda, double h) {
  return PerturbedOperator(model, K).krein_residual(lambda, h);
}

}  // namespace pdelta::perturbation
