#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pointdelta/solver.hpp"

using namespace pdelta;
using namespace pdelta::solver;
using perturbation::SpectralModel;

namespace {

SpectralModel ball_model(int M) { return SpectralModel(basis::SpectralBasis(3, M), Point::in_ball(0.1, 0.2, 0.3), 1.0); }
SpectralModel interval_model(int M) { return SpectralModel(basis::SpectralBasis(1, M), Point::on_line(0.3), 1.0); }

std::vector<Point> ball_points() {
  return {Point::in_ball(0.0, 0.0, 0.0), Point::in_ball(0.5, -0.1, 0.2), Point::in_ball(-0.3, 0.6, -0.4),
          Point::in_ball(0.0, 0.0, -0.9)};
}

}  // namespace

TEST_CASE("Dirichlet solve reproduces closed-form solutions") {
  const auto one = dirichlet_solve([](const Point&) { return 1.0; }, Point::on_line(0.5));
  CHECK(one.converged);
  CHECK(one.value == doctest::Approx(-0.125).epsilon(1e-12));
  for (double x : {0.1, 0.37, 0.9})
    CHECK(dirichlet_solve([](const Point&) { return 1.0; }, Point::on_line(x)).value ==
          doctest::Approx(0.5 * x * (x - 1.0)).epsilon(1e-12));

  // Δw = −1 with zero boundary values: w = (1 − |x|²)/6.
  for (const auto& p : ball_points()) {
    const auto r = dirichlet_solve([](const Point&) { return -1.0; }, p);
    CHECK(r.converged);
    CHECK(std::abs(r.value - (1.0 - p.norm2()) / 6.0) <= 1e-8);
  }

  // f = ω_n gives ω_n/μ_n.
  const auto m1 = interval_model(8);
  for (int n = 0; n < 4; ++n) {
    const Point x = Point::on_line(0.63);
    const auto r = dirichlet_solve([&](const Point& t) { return m1.basis().value(n, t); }, x);
    CHECK(std::abs(r.value - m1.basis().value(n, x) / m1.mu()(n)) <= 1e-10);
  }
  const auto m3 = ball_model(8);
  for (int n : {0, 1, 4}) {
    const Point x = Point::in_ball(0.2, -0.35, 0.15);
    const auto r = dirichlet_solve([&](const Point& t) { return m3.basis().value(n, t); }, x);
    CHECK(std::abs(r.value - m3.basis().value(n, x) / m3.mu()(n)) <= 1e-8);
  }
}

TEST_CASE("boundary-value solution: targets, kernels, singularity") {
  const kernels::KernelBundle kb(Point::in_ball(0.1, 0.2, 0.3));
  const Source f = [](const Point& t) { return std::cos(t[0]) + t[1] * t[2]; };
  const Point x = Point::in_ball(-0.4, 0.1, 0.5);
  const std::vector<double> zero(4, 0.0);
  CHECK(bm_solve(f, zero, kb, x) == doctest::Approx(dirichlet_solve(f, x).value).epsilon(1e-14));
  for (int j = 0; j < 4; ++j) {
    std::vector<double> e(4, 0.0);
    e[static_cast<std::size_t>(j)] = 1.0;
    CHECK(bm_solve([](const Point&) { return 0.0; }, e, kb, x) == doctest::Approx(kb.phi(j, x)).epsilon(1e-14));
  }
  try {
    bm_solve(f, zero, kb, kb.puncture());
    FAIL("expected an error");
  } catch (const NumericalError& e) {
    CHECK(e.kind() == ErrorKind::KernelSingularity);
  }
  SolveOptions strict;
  strict.radial_order = 4;
  strict.sphere_order = 4;
  strict.tol = 1e-15;
  CHECK_THROWS_AS(bm_solve([](const Point& t) { return std::exp(5 * t[0]); }, zero, kb, x, strict), NumericalError);

  // Linearity in (f, g).
  const Source g = [](const Point& t) { return t[0] * t[0] - t[2]; };
  const std::vector<double> s{1.0, -0.5, 0.2, 0.7}, t{0.3, 0.1, -0.8, 0.0};
  std::vector<double> comb(4);
  for (std::size_t i = 0; i < 4; ++i) comb[i] = 2.0 * s[i] - 3.0 * t[i];
  const double lhs = bm_solve([&](const Point& p) { return 2.0 * f(p) - 3.0 * g(p); }, comb, kb, x);
  CHECK(std::abs(lhs - (2.0 * bm_solve(f, s, kb, x) - 3.0 * bm_solve(g, t, kb, x))) <= 1e-9);

  // The solution vanishes on approach to the outer boundary.
  // The two angular levels agree only to about 1e−7 this close to the sphere.
  SolveOptions loose;
  loose.tol = 1e-6;
  for (double r : {1.0 - 1e-3, 1.0 - 1e-4, 1.0 - 1e-6}) {
    const Point near = Point::in_ball(0.0, r * 0.6, r * 0.8);
    CHECK(std::abs(bm_solve(f, s, kb, near, loose)) <= 50.0 * (1.0 - r));
  }
}

TEST_CASE("boundary functionals recover the prescribed targets") {
  // d = 1 through the quadrature solver.
  const kernels::KernelBundle kb(Point::on_line(0.3));
  const std::vector<double> g1{0.7, -1.3};
  const auto field = bm_field([](const Point& t) { return std::sin(3 * t[0]) + 1.0; }, g1, kb);
  const auto gv = gamma::gamma_vector(field, kb.puncture());
  for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(gv.values[j] - g1[j]) <= 1e-6);

  // d = 3 through the spectral volume term.
  const auto m = ball_model(30);
  Eigen::VectorXd f_hat = Eigen::VectorXd::Zero(30);
  f_hat(0) = 1.0;
  f_hat(3) = -0.4;
  f_hat(7) = 0.25;
  const std::vector<double> g3{0.5, -0.2, 1.1, 0.3};
  const auto gv3 = gamma::gamma_vector(bm_field(m, f_hat, g3), m.puncture());
  for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(gv3.values[j] - g3[j]) <= 1e-6);
}

TEST_CASE("B_K solve: zero perturbation, resolvent at zero, boundary audit") {
  const auto m = ball_model(60);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(60);
  for (int n = 0; n < 6; ++n) f(n) = u(rng);

  const auto plain = bk_solve(m, perturbation::zero_perturbation(m), f);
  CHECK(plain.singular.isZero(0.0));
  for (int n = 0; n < 60; ++n) CHECK(std::abs(plain.regular(n) - f(n) / m.mu()(n)) == 0.0);

  const auto K = perturbation::preset_alpha_family(std::vector<cplx>{1.0, 0.5, -0.3, 0.8}, m);
  const auto sol = bk_solve(m, K, f);
  const auto via_resolvent = perturbation::PerturbedOperator(m, K).resolvent_field(f, 0.0);
  for (const auto& p : ball_points()) {
    const cplx v = evaluate(m, sol, p);
    CHECK(std::abs(v - evaluate(m, via_resolvent, p)) <= 1e-12 * std::max(1.0, std::abs(v)));
    CHECK(std::abs(v - bk_solve(m, K, f, p)) <= 1e-14 * std::max(1.0, std::abs(v)));
  }

  // Γ_1 of the solution equals γ(K f).
  const Eigen::VectorXcd target = K.C * f;
  std::vector<double> targets(4);
  for (int j = 0; j < 4; ++j) targets[static_cast<std::size_t>(j)] = sol.singular(j).real();
  const auto gv = gamma::gamma_vector(bm_field(m, f.real(), targets), m.puncture());
  for (int j = 0; j < 4; ++j) CHECK(std::abs(gv.values[static_cast<std::size_t>(j)] - target(j)) <= 1e-6);
}

TEST_CASE("decomposition into regular and singular parts") {
  const auto m = ball_model(20);
  const auto& kb = m.kernels();
  for (int j = 0; j < 4; ++j) {
    const gamma::Field phi{[&, j](const Point& x) { return kb.phi(j, x); },
                           [&, j](const Point& x) { return kb.phi_gradient(j, x); }};
    const auto parts = decompose(phi, m);
    for (int i = 0; i < 4; ++i)
      CHECK(std::abs(parts.singular[static_cast<std::size_t>(i)] - (i == j ? 1.0 : 0.0)) <= 1e-6);
    CHECK(parts.regular.norm() <= 1e-6);
  }

  // Round trip h = Σ a_n ω_n + Σ c_j φ_j.
  const std::vector<double> c{0.4, -0.6, 0.2, 1.5};
  Eigen::VectorXd a = Eigen::VectorXd::Zero(20);
  a(0) = 0.8;
  a(2) = -0.3;
  a(9) = 0.1;
  const gamma::Field h{[&](const Point& x) {
                         double v = 0.0;
                         for (int n = 0; n < 20; ++n) v += a(n) * m.basis().value(n, x);
                         for (int j = 0; j < 4; ++j) v += c[static_cast<std::size_t>(j)] * kb.phi(j, x);
                         return v;
                       },
                       {}};
  const auto parts = decompose(h, m);
  for (int j = 0; j < 4; ++j) CHECK(std::abs(parts.singular[static_cast<std::size_t>(j)] - c[static_cast<std::size_t>(j)]) <= 1e-6);
  CHECK((parts.regular - a).norm() <= 1e-6);
  CHECK(std::abs(parts.projection_residual) <= 1e-6);
  const Point x = Point::in_ball(-0.2, 0.4, 0.1);
  CHECK(std::abs(assemble(parts, m, x) - h.value(x)) <= 1e-6);

  // A smooth field has no singular part.
  const gamma::Field smooth{[&](const Point& x) { return m.basis().value(1, x); }, {}};
  const auto sp = decompose(smooth, m);
  for (double v : sp.singular) CHECK(std::abs(v) <= 1e-7);
  CHECK(std::abs(sp.regular(1) - 1.0) <= 1e-6);

  // d = 1.
  const auto m1 = interval_model(64);
  const gamma::Field h1{[&](const Point& x) {
                          return 0.5 * m1.basis().value(0, x) - 2.0 * m1.kernels().phi(0, x) + 0.7 * m1.kernels().phi(1, x);
                        },
                        {}};
  const auto p1 = decompose(h1, m1);
  CHECK(std::abs(p1.singular[0] + 2.0) <= 1e-6);
  CHECK(std::abs(p1.singular[1] - 0.7) <= 1e-6);
  CHECK(std::abs(p1.regular(0) - 0.5) <= 1e-6);
}

TEST_CASE("volume integral") {
  CHECK(volume_integral([](const Point&) { return 1.0; }, 3, Point::in_ball(0.1, 0.2, 0.3)) ==
        doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-12));
  CHECK(volume_integral([](const Point& x) { return x.norm2(); }, 3, Point::in_ball(0.1, 0.2, 0.3)) ==
        doctest::Approx(4.0 * M_PI / 5.0).epsilon(1e-12));
  CHECK(volume_integral([](const Point& x) { return x[0] * x[0]; }, 1, Point::on_line(0.3)) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}
