#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pointdelta/gamma.hpp"
#include "pointdelta/kernels.hpp"
#include "pointdelta/quadrature.hpp"

using namespace pdelta;
using namespace pdelta::gamma;
using doctest::Approx;

namespace {

Field kernel_field(const kernels::KernelBundle& kb, int j) {
  return {[&kb, j](const Point& x) { return kb.phi(j, x); },
          [&kb, j](const Point& x) { return kb.phi_gradient(j, x); }};
}

// Smooth and Dirichlet-zero: (1 − |x|²)(p + q·x).
Field smooth_field(double p, std::array<double, 3> q) {
  return {[=](const Point& x) { return (1.0 - x.norm2()) * (p + q[0] * x[0] + q[1] * x[1] + q[2] * x[2]); },
          [=](const Point& x) {
            const double a = 1.0 - x.norm2(), b = p + q[0] * x[0] + q[1] * x[1] + q[2] * x[2];
            return std::array<double, 3>{-2 * x[0] * b + a * q[0], -2 * x[1] * b + a * q[1], -2 * x[2] * b + a * q[2]};
          }};
}

Field combine(const Field& w0, const kernels::KernelBundle& kb, std::vector<double> c) {
  Field h;
  h.value = [=, &kb](const Point& x) {
    double v = w0.value(x);
    for (int j = 0; j < kb.singular_count(); ++j) v += c[static_cast<std::size_t>(j)] * kb.phi(j, x);
    return v;
  };
  return h;
}

}  // namespace

TEST_CASE("gamma table in the ball: raw functionals of G and its source derivatives") {
  const Point x0 = Point::in_ball(0.1, -0.2, 0.15);
  const kernels::KernelBundle kb(x0);
  for (int f = 0; f <= 3; ++f) {
    const auto gv = raw_gamma_vector(kernel_field(kb, f), x0);
    for (int j = 0; j <= 3; ++j) {
      const double expected = f == 0 ? (j == 0 ? -1.0 : 0.0) : (j == f ? 1.0 : 0.0);
      CHECK(std::abs(gv.values[static_cast<std::size_t>(j)] - expected) <= 1e-6);
      CHECK(std::isfinite(gv.err[static_cast<std::size_t>(j)]));
    }
  }
}

TEST_CASE("G gives -1 at every radius, not only in the limit") {
  const Point x0 = Point::in_ball(0.0, 0.3, 0.0);
  const kernels::KernelBundle kb(x0);
  for (double r : {0.2, 0.1, 0.05}) CHECK(surface_gamma(kernel_field(kb, 0), 0, x0, r) == Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("gamma table on the interval") {
  const Point x0 = Point::on_line(0.3);
  const kernels::KernelBundle kb(x0);
  const auto g = raw_gamma_vector(kernel_field(kb, 0), x0);
  CHECK(g.values[0] == Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(g.values[1]) <= 1e-12);
  const auto p = raw_gamma_vector(kernel_field(kb, 1), x0);
  CHECK(std::abs(p.values[0]) <= 1e-12);
  CHECK(p.values[1] == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("smooth fields and constants have vanishing functionals") {
  const Point x0 = Point::in_ball(0.2, 0.1, -0.3);
  const auto gv = raw_gamma_vector(smooth_field(0.7, {0.3, -1.2, 0.5}), x0);
  for (double v : gv.values) CHECK(std::abs(v) <= 1e-8);
  const Field one{[](const Point&) { return 1.0; }};
  CHECK(std::abs(surface_gamma(one, 0, x0, 0.05)) <= 1e-12);
  const Field zero{[](const Point&) { return 0.0; }};
  for (double v : gamma_vector(zero, x0).values) CHECK(v == 0.0);
}

TEST_CASE("decomposition coordinates recover random coefficients, and the map is linear") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Point x0 = Point::in_ball(-0.1, 0.25, 0.05);
  const kernels::KernelBundle kb(x0);
  std::vector<double> c{u(rng), u(rng), u(rng), u(rng)};
  const Field w0 = smooth_field(u(rng), {u(rng), u(rng), u(rng)});
  const auto gv = gamma_vector(combine(w0, kb, c), x0);
  for (int j = 0; j <= 3; ++j) CHECK(std::abs(gv.values[static_cast<std::size_t>(j)] - c[static_cast<std::size_t>(j)]) <= 1e-6);

  const auto e0 = gamma_vector(kernel_field(kb, 0), x0);
  CHECK(e0.values[0] == Approx(1.0).epsilon(1e-6));

  std::vector<double> c2{u(rng), u(rng), u(rng), u(rng)};
  const auto gv2 = gamma_vector(combine(w0, kb, c2), x0);
  std::vector<double> sum(4);
  for (std::size_t j = 0; j < 4; ++j) sum[j] = 2.0 * c[j] - 3.0 * c2[j];
  const Field lin = combine(Field{[&](const Point& x) { return -w0.value(x); }}, kb, sum);
  const auto gl = gamma_vector(lin, x0);
  for (std::size_t j = 0; j < 4; ++j)
    CHECK(std::abs(gl.values[j] - (2.0 * gv.values[j] - 3.0 * gv2.values[j])) <= 1e-6);
}

TEST_CASE("error cases") {
  const Point x0 = Point::in_ball(0.5, 0.0, 0.0);
  const Field one{[](const Point&) { return 1.0; }};
  try {
    surface_gamma(one, 0, x0, 0.6);
    FAIL("expected an error");
  } catch (const NumericalError& e) {
    CHECK(e.kind() == ErrorKind::SphereLeavesDomain);
  }
  CHECK_THROWS_AS(surface_gamma(one, 0, x0, 0.1, 2), NumericalError);
  const std::vector<double> increasing{0.01, 0.02};
  CHECK_THROWS_AS(gamma_limit(one, 0, x0, increasing), NumericalError);

  // A field more singular than the kernel family does not have a finite limit.
  const Field wild{[x0](const Point& x) { return std::pow(distance(x, x0), -3.0); }};
  const auto radii = geometric_schedule(0.1, 7);
  try {
    gamma_limit(wild, 0, x0, radii);
    FAIL("expected an error");
  } catch (const NumericalError& e) {
    CHECK(e.kind() == ErrorKind::GammaNotStable);
  }
}

TEST_CASE("beta functionals") {
  const Point x0 = Point::in_ball(0.2, -0.1, 0.3);
  const auto b = beta_vector(Field{[](const Point& x) { return x[0]; }}, x0);
  CHECK(b.values[0] == Approx(0.2).epsilon(1e-14));
  CHECK(b.values[1] == Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(b.values[2]) <= 1e-10);
  CHECK(std::abs(b.values[3]) <= 1e-10);

  const Point y0 = Point::on_line(0.37);
  const int n = 3;
  const Field omega{[n](const Point& x) { return std::sqrt(2.0) * std::sin(n * std::numbers::pi * x[0]); }};
  const auto bw = beta_vector(omega, y0);
  CHECK(bw.values[0] == Approx(omega.value(y0)).epsilon(1e-15));
  const double exact = std::sqrt(2.0) * n * std::numbers::pi * std::cos(n * std::numbers::pi * 0.37);
  CHECK(std::abs(bw.values[1] - exact) <= 1e-8 * std::abs(exact));
}

TEST_CASE("boundary form: skewness, vanishing for smooth pairs, undecomposed input") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  using cplx = std::complex<double>;
  DecomposedParts w;
  for (int i = 0; i < 4; ++i) {
    w.gamma.emplace_back(u(rng), u(rng));
    w.beta.emplace_back(u(rng), u(rng));
  }
  CHECK(std::abs(boundary_form(w, w).real()) <= 1e-12);
  DecomposedParts s1{{0, 0, 0, 0}, {cplx(u(rng)), 1.0, 2.0, 3.0}}, s2{{0, 0, 0, 0}, {4.0, 5.0, 6.0, 7.0}};
  CHECK(std::abs(boundary_form(s1, s2)) == 0.0);
  CHECK_THROWS_AS(boundary_form(DecomposedParts{}, w), NumericalError);
  DecomposedParts short_parts{{1.0}, {1.0}};
  CHECK_THROWS_AS(boundary_form(short_parts, w), NumericalError);
}

TEST_CASE("boundary form equals minus the L2 defect on the interval") {
  // w = w0 + c0 φ0 + c1 φ1 with w0 = x(1 − x)(p + q x); B_M w = w0''.
  const double x0 = 0.4;
  const kernels::KernelBundle kb(Point::on_line(x0));
  struct Parts {
    double p, q, c0, c1;
    double w0(double x) const { return x * (1 - x) * (p + q * x); }
    double w0p(double x) const { return (1 - 2 * x) * (p + q * x) + x * (1 - x) * q; }
    double w0pp(double x) const { return -2 * (p + q * x) + 2 * (1 - 2 * x) * q; }
  };
  const Parts a{0.3, -1.1, 0.7, -0.4}, b{-0.8, 0.5, -0.2, 0.9};
  const auto full = [&](const Parts& P, double x) {
    const Point pt = Point::on_line(x);
    return P.w0(x) + P.c0 * kb.phi(0, pt) + P.c1 * kb.phi(1, pt);
  };
  const auto integrand = [&](double x) { return a.w0pp(x) * full(b, x) - full(a, x) * b.w0pp(x); };
  const double defect = quad::integrate(integrand, 0.0, x0, 20, 4) + quad::integrate(integrand, x0, 1.0, 20, 4);
  const DecomposedParts wa{{a.c0, a.c1}, {a.w0(x0), a.w0p(x0)}}, wb{{b.c0, b.c1}, {b.w0(x0), b.w0p(x0)}};
  CHECK(defect == Approx(-boundary_form(wa, wb).real()).epsilon(1e-12));
}
