#include "pointdelta/solver.hpp"

#include <cmath>

#include "pointdelta/quadrature.hpp"

namespace pdelta::solver {

namespace {

// ∫ over the ball in spherical coordinates centered at c: Σ_η w_η ∫_0^{ρmax(η)} g(c + ρη) ρ² dρ.
double centered_ball_integral(const Source& g, const Point& c, int radial_order, int sphere_order) {
  const auto& rule = quad::sphere_rule(sphere_order);
  const auto& gl = quad::gauss_legendre(radial_order);
  const double c2 = c.norm2();
  double total = 0.0;
  for (std::size_t k = 0; k < rule.directions.size(); ++k) {
    const auto& eta = rule.directions[k];
    const double ce = c[0] * eta[0] + c[1] * eta[1] + c[2] * eta[2];
    const double rho_max = -ce + std::sqrt(ce * ce + 1.0 - c2);
    double radial = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double rho = 0.5 * rho_max * (gl.nodes[i] + 1.0);
      radial += gl.weights[i] * g(shifted(c, eta, rho)) * rho * rho;
    }
    total += rule.weights[k] * 0.5 * rho_max * radial;
  }
  return total;
}

double split_interval_integral(const std::function<double(double)>& g, double at, int order, int panels) {
  return quad::integrate(g, 0.0, at, order, panels) + quad::integrate(g, at, 1.0, order, panels);
}

}  // namespace

SolveResult dirichlet_solve(const Source& f, const Point& x, const SolveOptions& opts) {
  SolveResult out;
  if (x.dim == 1) {
    const double xv = x[0];
    if (!(xv > 0.0 && xv < 1.0)) {
      out.converged = true;
      return out;
    }
    const auto g = [&](double t) { return kernels::green_interval(xv, t) * f(Point::on_line(t)); };
    const double coarse = split_interval_integral(g, xv, opts.radial_order, opts.panels);
    out.value = split_interval_integral(g, xv, opts.radial_order, 2 * opts.panels);
    out.err = std::abs(out.value - coarse);
  } else {
    require_dimension(x.dim);
    if (x.norm2() >= 1.0) {
      out.converged = true;
      return out;
    }
    const auto g = [&](const Point& xi) {
      if (distance2(xi, x) == 0.0) return 0.0;
      return kernels::green_ball(x, xi) * f(xi);
    };
    const double coarse = centered_ball_integral(g, x, opts.radial_order, opts.sphere_order);
    out.value = centered_ball_integral(g, x, opts.radial_order + opts.radial_order / 2,
                                       opts.sphere_order + opts.sphere_order / 2);
    out.err = std::abs(out.value - coarse);
  }
  out.converged = out.err <= opts.tol * std::max(1.0, std::abs(out.value));
  return out;
}

double bm_solve(const Source& f, std::span<const double> targets, const kernels::KernelBundle& kernels,
                const Point& x, const SolveOptions& opts) {
  if (static_cast<int>(targets.size()) != kernels.singular_count())
    throw NumericalError(ErrorKind::InvalidArgument, "bm_solve needs d+1 internal values");
  if (distance2(x, kernels.puncture()) == 0.0)
    throw NumericalError(ErrorKind::KernelSingularity, "evaluation at the puncture");
  const SolveResult w = dirichlet_solve(f, x, opts);
  if (!w.converged) throw NumericalError(ErrorKind::QuadratureNotConverged, "volume quadrature did not converge");
  double u = w.value;
  for (int j = 0; j < kernels.singular_count(); ++j)
    if (targets[static_cast<std::size_t>(j)] != 0.0) u += targets[static_cast<std::size_t>(j)] * kernels.phi(j, x);
  return u;
}

gamma::Field bm_field(const Source& f, std::vector<double> targets, const kernels::KernelBundle& kernels,
                      const SolveOptions& opts) {
  gamma::Field h;
  h.value = [f, targets = std::move(targets), kernels, opts](const Point& x) {
    return bm_solve(f, targets, kernels, x, opts);
  };
  return h;
}

gamma::Field bm_field(const perturbation::SpectralModel& model, Eigen::VectorXd f_hat, std::vector<double> targets) {
  if (f_hat.size() != model.size() || static_cast<int>(targets.size()) != model.rows())
    throw NumericalError(ErrorKind::InvalidArgument, "bm_field needs M coefficients and d+1 internal values");
  Eigen::VectorXd reg = f_hat.cwiseQuotient(model.mu());
  gamma::Field h;
  h.value = [&model, reg, targets](const Point& x) {
    double u = 0.0;
    for (int n = 0; n < reg.size(); ++n)
      if (reg(n) != 0.0) u += reg(n) * model.basis().value(n, x);
    for (int j = 0; j < model.rows(); ++j) u += targets[static_cast<std::size_t>(j)] * model.kernels().phi(j, x);
    return u;
  };
  h.gradient = [&model, reg, targets](const Point& x) {
    std::array<double, 3> g{0.0, 0.0, 0.0};
    for (int n = 0; n < reg.size(); ++n) {
      if (reg(n) == 0.0) continue;
      const auto gn = model.basis().gradient(n, x);
      for (int s = 0; s < 3; ++s) g[static_cast<std::size_t>(s)] += reg(n) * gn[static_cast<std::size_t>(s)];
    }
    for (int j = 0; j < model.rows(); ++j) {
      const auto gj = model.kernels().phi_gradient(j, x);
      for (int s = 0; s < 3; ++s)
        g[static_cast<std::size_t>(s)] += targets[static_cast<std::size_t>(j)] * gj[static_cast<std::size_t>(s)];
    }
    return g;
  };
  return h;
}

perturbation::SpectralField bk_solve(const perturbation::SpectralModel& model, const perturbation::PerturbationK& K,
                                     const Eigen::VectorXcd& f_hat) {
  if (f_hat.size() != model.size() || K.size() != model.size())
    throw NumericalError(ErrorKind::InvalidArgument, "coefficient vectors must match the basis");
  perturbation::SpectralField u;
  u.regular = f_hat.cwiseQuotient(model.mu().cast<cplx>());
  u.singular = K.C * f_hat;
  return u;
}

cplx bk_solve(const perturbation::SpectralModel& model, const perturbation::PerturbationK& K,
              const Eigen::VectorXcd& f_hat, const Point& x) {
  if (distance2(x, model.puncture()) == 0.0)
    throw NumericalError(ErrorKind::KernelSingularity, "evaluation at the puncture");
  return perturbation::evaluate(model, bk_solve(model, K, f_hat), x);
}

double volume_integral(const Source& f, int dim, const Point& x0, int radial_order, int sphere_order) {
  if (dim == 1) {
    const auto g = [&](double t) { return f(Point::on_line(t)); };
    return split_interval_integral(g, x0[0], radial_order, 8);
  }
  require_dimension(dim);
  return centered_ball_integral(f, x0, radial_order, sphere_order);
}

DecomposedField decompose(const gamma::Field& h, const perturbation::SpectralModel& model,
                          const gamma::GammaOptions& gopts) {
  DecomposedField out;
  const auto gv = gamma::gamma_vector(h, model.puncture(), gopts);
  out.singular = gv.values;
  out.singular_err = gv.err;
  const auto& kern = model.kernels();
  const auto regular = [&](const Point& x) {
    if (distance2(x, model.puncture()) == 0.0) return 0.0;
    double v = h.value(x);
    for (int j = 0; j < kern.singular_count(); ++j) v -= out.singular[static_cast<std::size_t>(j)] * kern.phi(j, x);
    return v;
  };
  const int M = model.size();
  out.regular = Eigen::VectorXd::Zero(M);
  double norm2 = 0.0;
  std::vector<double> weights;
  std::vector<Point> points;
  if (model.dim() == 1) {
    const auto& gl = quad::gauss_legendre(40);
    const double x0 = model.puncture()[0];
    for (auto [a, b] : {std::pair{0.0, x0}, std::pair{x0, 1.0}}) {
      const int panels = 8;
      const double w = (b - a) / panels;
      for (int p = 0; p < panels; ++p)
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
          points.push_back(Point::on_line(a + w * (p + 0.5 * (gl.nodes[i] + 1.0))));
          weights.push_back(0.5 * w * gl.weights[i]);
        }
    }
  } else {
    const auto& rule = quad::sphere_rule(24);
    const auto& gl = quad::gauss_legendre(40);
    const Point& c = model.puncture();
    const double c2 = c.norm2();
    for (std::size_t k = 0; k < rule.directions.size(); ++k) {
      const auto& eta = rule.directions[k];
      const double ce = c[0] * eta[0] + c[1] * eta[1] + c[2] * eta[2];
      const double rho_max = -ce + std::sqrt(ce * ce + 1.0 - c2);
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double rho = 0.5 * rho_max * (gl.nodes[i] + 1.0);
        points.push_back(shifted(c, eta, rho));
        weights.push_back(rule.weights[k] * 0.5 * rho_max * gl.weights[i] * rho * rho);
      }
    }
  }
  for (std::size_t q = 0; q < points.size(); ++q) {
    const double r = regular(points[q]);
    if (r == 0.0) continue;
    norm2 += weights[q] * r * r;
    for (int n = 0; n < M; ++n) out.regular(n) += weights[q] * r * model.basis().value(n, points[q]);
  }
  out.projection_residual = std::max(0.0, norm2 - out.regular.squaredNorm());
  return out;
}

double assemble(const DecomposedField& parts, const perturbation::SpectralModel& model, const Point& x) {
  double v = 0.0;
  for (int n = 0; n < parts.regular.size(); ++n) v += parts.regular(n) * model.basis().value(n, x);
  for (int j = 0; j < model.rows(); ++j)
    if (parts.singular[static_cast<std::size_t>(j)] != 0.0)
      v += parts.singular[static_cast<std::size_t>(j)] * model.kernels().phi(j, x);
  return v;
}

}  // namespace pdelta::solver
