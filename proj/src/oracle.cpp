#include "pointdelta/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "pointdelta/kernels.hpp"
#include "pointdelta/quadrature.hpp"

namespace pdelta::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

double bisect(const std::function<double(double)>& F, double a, double b, double tol) {
  double fa = F(a);
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = F(m);
    if (fm == 0.0) return m;
    if (std::signbit(fm) == std::signbit(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> scan_roots(const std::function<double(double)>& F, double from, double to, double step,
                               std::size_t limit) {
  std::vector<double> roots;
  double a = from, fa = F(a);
  while (a < to && roots.size() < limit) {
    const double b = a + step, fb = F(b);
    if (fb == 0.0) {
      roots.push_back(b);
      a = b + 1e-12;
      fa = F(a);
      continue;
    }
    if (std::signbit(fa) != std::signbit(fb)) roots.push_back(bisect(F, a, b, 1e-14));
    a = b;
    fa = fb;
  }
  return roots;
}

}  // namespace

OracleReport make_report(std::string quantity, double main_value, double oracle_value, std::string method) {
  OracleReport r;
  r.quantity = std::move(quantity);
  r.main_value = main_value;
  r.oracle_value = oracle_value;
  r.abs_err = std::abs(main_value - oracle_value);
  r.rel_err = r.abs_err / std::max(std::abs(oracle_value), 1e-300);
  r.method = std::move(method);
  return r;
}

std::vector<double> delta_well_spectrum_1d(double k, double x0, int count) {
  if (!(x0 > 0.0 && x0 < 1.0)) throw NumericalError(ErrorKind::InvalidArgument, "x0 must lie in (0, 1)");
  if (count <= 0) return {};
  std::vector<double> out;
  // λ = t² > 0, scaled by e^{−t} to stay finite.
  const auto Fpos = [&](double t) {
    const double a = t * x0, b = t * (1.0 - x0);
    return t * (1.0 - std::exp(-2 * t)) / 2 + k * (1.0 - std::exp(-2 * b) - std::exp(-2 * a) + std::exp(-2 * t)) / 4;
  };
  for (double t : scan_roots(Fpos, 1e-6, std::abs(k) + 10.0, 0.01, 4)) out.push_back(t * t);
  const auto Fneg = [&](double s) { return s * std::sin(s) + k * std::sin(s * x0) * std::sin(s * (1.0 - x0)); };
  const auto neg = scan_roots(Fneg, 1e-6, 1e9, 0.01, static_cast<std::size_t>(count));
  for (double s : neg) out.push_back(-s * s);
  std::sort(out.begin(), out.end(), std::greater<>());
  out.resize(std::min<std::size_t>(out.size(), static_cast<std::size_t>(count)));
  return out;
}

std::vector<double> fd_eigenvalues_1d(int N, double k, double x0, int count) {
  if (N < 3) throw NumericalError(ErrorKind::InvalidArgument, "need at least 3 interior nodes");
  const double h = 1.0 / (N + 1);
  const long i0 = std::lround(x0 / h);
  Eigen::VectorXd diag = Eigen::VectorXd::Constant(N, -2.0 / (h * h));
  Eigen::VectorXd sub = Eigen::VectorXd::Constant(N - 1, 1.0 / (h * h));
  if (i0 >= 1 && i0 <= N) diag(i0 - 1) -= k / h;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + N);
  std::sort(ev.begin(), ev.end(), std::greater<>());
  ev.resize(std::min<std::size_t>(ev.size(), static_cast<std::size_t>(count)));
  return ev;
}

FdSpectrum fd_discretize_1d(int N, double k, double x0, int count) {
  FdSpectrum out;
  out.coarse_nodes = N;
  out.fine_nodes = 2 * N + 1;
  const auto coarse = fd_eigenvalues_1d(N, k, x0, count);
  const auto fine = fd_eigenvalues_1d(out.fine_nodes, k, x0, count);
  for (std::size_t i = 0; i < std::min(coarse.size(), fine.size()); ++i) {
    const double r = (4.0 * fine[i] - coarse[i]) / 3.0;
    out.eigenvalues.push_back(r);
    out.error_bar.push_back(std::abs(r - fine[i]));
  }
  return out;
}

Integral volume_inner_product(const std::function<double(const Point&)>& f,
                              const std::function<double(const Point&)>& g, const Point& x0, int order,
                              double delta0, int levels) {
  const auto fg = [&](const Point& p) { return f(p) * g(p); };
  std::vector<double> values;
  for (int k = 0; k < levels; ++k) {
    const double delta = delta0 * std::pow(0.5, k);
    double v = 0.0;
    if (x0.dim == 1) {
      const auto line = [&](double t) { return fg(Point::on_line(t)); };
      v = quad::integrate(line, 0.0, x0[0] - delta, order, 8) + quad::integrate(line, x0[0] + delta, 1.0, order, 8);
    } else {
      require_dimension(x0.dim);
      const auto& rule = quad::sphere_rule(order);
      const double c2 = x0.norm2();
      for (std::size_t q = 0; q < rule.directions.size(); ++q) {
        const auto& eta = rule.directions[q];
        const double ce = x0[0] * eta[0] + x0[1] * eta[1] + x0[2] * eta[2];
        const double rho_max = -ce + std::sqrt(ce * ce + 1.0 - c2);
        const auto radial = [&](double rho) { return fg(shifted(x0, eta, rho)) * rho * rho; };
        v += rule.weights[q] * quad::integrate(radial, delta, rho_max, order, 2);
      }
    }
    values.push_back(v);
  }
  const auto ex = quad::richardson(values, 1, std::max(1, levels - 1));
  return {ex.value, ex.error};
}

KappaVerdict kappa_verdict(double x0, int nmax, int order_a, int order_b, double tol) {
  KappaVerdict out;
  const Point p0 = Point::on_line(x0);
  const auto green = [x0](const Point& x) { return kernels::green_interval(x[0], x0); };
  bool fits1 = true, fits2 = true;
  for (int order : {order_a, order_b}) {
    for (int n = 1; n <= nmax; ++n) {
      const double omega0 = std::sqrt(2.0) * std::sin(n * kPi * x0);
      if (std::abs(omega0) < 1e-8) continue;
      const auto omega = [n](const Point& x) { return std::sqrt(2.0) * std::sin(n * kPi * x[0]); };
      const double mu = -(n * kPi) * (n * kPi);
      const double ratio = volume_inner_product(green, omega, p0, order).value * mu / omega0;
      out.ratios.push_back(ratio);
      out.orders.push_back(order);
      fits1 = fits1 && std::abs(ratio - 1.0) <= tol;
      fits2 = fits2 && std::abs(ratio - 2.0) <= tol;
    }
  }
  out.consistent = fits1 != fits2;
  out.kappa = fits1 && !fits2 ? 1.0 : (fits2 && !fits1 ? 2.0 : 0.0);
  return out;
}

std::vector<double> rank_probe(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply, int size,
                               int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd S(size, samples);
  for (int k = 0; k < samples; ++k) {
    Eigen::VectorXcd u(size);
    for (int i = 0; i < size; ++i) u(i) = normal(rng);
    u.normalize();
    S.col(k) = apply(u);
  }
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(S);
  const auto& sv = svd.singularValues();
  return {sv.data(), sv.data() + sv.size()};
}

}  // namespace pdelta::oracle
