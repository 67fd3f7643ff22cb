#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pointdelta/kernels.hpp"
#include "pointdelta/quadrature.hpp"

using namespace pdelta;
using namespace pdelta::kernels;
using doctest::Approx;

namespace {

Point random_interior(std::mt19937_64& rng, double rmax = 0.95) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    const double a = u(rng), b = u(rng), c = u(rng);
    if (a * a + b * b + c * c < rmax * rmax) return Point::in_ball(a, b, c);
  }
}

Point random_on_sphere(std::mt19937_64& rng) {
  const Point p = random_interior(rng, 1.0);
  const double r = p.norm();
  return Point::in_ball(p[0] / r, p[1] / r, p[2] / r);
}

}  // namespace

TEST_CASE("xyz quantities at the center") {
  const auto q = xyz_quantities(Point::in_ball(0, 0, 0), Point::in_ball(0.5, 0, 0));
  CHECK(q.x2 == Approx(0.25).epsilon(1e-15));
  CHECK(q.y2 == Approx(1.0).epsilon(1e-15));
  CHECK(q.z2 == Approx(0.75).epsilon(1e-15));
}

TEST_CASE("X^2 = Y^2 - Z^2 on random pairs, with Z = 0 on the sphere") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Point x = random_interior(rng), xi = random_interior(rng);
    const auto q = xyz_quantities(x, xi);
    CHECK(std::abs(q.x2 - (q.y2 - q.z2)) <= 1e-12 * q.x2);
    CHECK(q.y2 >= q.z2);
  }
  const Point x = random_on_sphere(rng), xi = random_interior(rng);
  const auto q = xyz_quantities(x, xi);
  CHECK(q.z2 == Approx(0.0).epsilon(1e-15));
  CHECK(q.x2 == Approx(q.y2).epsilon(1e-13));
}

TEST_CASE("image point undefined at the origin") {
  try {
    xyz_quantities(Point::in_ball(0.1, 0, 0), Point::in_ball(0, 0, 0));
    FAIL("expected an error");
  } catch (const NumericalError& e) {
    CHECK(e.kind() == ErrorKind::ImagePointUndefined);
  }
}

TEST_CASE("fundamental solution values and singularity") {
  CHECK(fundamental_solution(Point::in_ball(0, 0, 0), Point::in_ball(1, 0, 0)) ==
        Approx(-1.0 / (4 * std::numbers::pi)).epsilon(1e-15));
  CHECK(fundamental_solution(Point::in_ball(0, 0, 0), Point::in_ball(0, 0.5, 0)) ==
        Approx(-1.0 / (2 * std::numbers::pi)).epsilon(1e-15));
  CHECK_THROWS_AS(fundamental_solution(Point::in_ball(0.2, 0, 0), Point::in_ball(0.2, 0, 0)), NumericalError);
}

TEST_CASE("ball Green function: value, boundary, symmetry, origin limit") {
  CHECK(green_ball(Point::in_ball(0, 0, 0), Point::in_ball(0.5, 0, 0)) ==
        Approx(-1.0 / (4 * std::numbers::pi)).epsilon(1e-14));
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Point x = random_interior(rng), xi = random_interior(rng);
    const double g = green_ball(x, xi);
    CHECK(std::abs(g - green_ball(xi, x)) <= 1e-12 * std::abs(g));
    CHECK(std::abs(green_ball(random_on_sphere(rng), xi)) <= 1e-12);
  }
  const Point x = Point::in_ball(0.3, -0.2, 0.4);
  const double limit = -1.0 / (4 * std::numbers::pi) * (1.0 / x.norm() - 1.0);
  CHECK(green_ball(x, Point::in_ball(0, 0, 0)) == Approx(limit).epsilon(1e-14));
  CHECK(green_ball(x, Point::in_ball(1e-6, 0, 0)) == Approx(limit).epsilon(1e-5));
  CHECK_THROWS_AS(green_ball(x, x), NumericalError);
}

TEST_CASE("ball Green function is harmonic away from the pole (sphere mean value)") {
  const Point xi = Point::in_ball(0.1, 0.2, -0.1);
  const Point x = Point::in_ball(-0.4, 0.1, 0.3);
  const auto& rule = quad::sphere_rule(16);
  for (double r : {0.1, 0.05}) {
    double mean = 0.0;
    for (std::size_t k = 0; k < rule.directions.size(); ++k)
      mean += rule.weights[k] * green_ball(shifted(x, rule.directions[k], r), xi);
    mean /= 4 * std::numbers::pi;
    CHECK(mean == Approx(green_ball(x, xi)).epsilon(1e-12));
  }
}

TEST_CASE("flux of the Green function through small spheres tends to one") {
  const Point xi = Point::in_ball(0.2, -0.1, 0.3);
  const auto& rule = quad::sphere_rule(24);
  for (double r : {0.1, 0.01}) {
    double flux = 0.0;
    for (std::size_t k = 0; k < rule.directions.size(); ++k) {
      const auto& n = rule.directions[k];
      const auto g = green_ball_field_gradient(shifted(xi, n, r), xi);
      flux += rule.weights[k] * r * r * (g[0] * n[0] + g[1] * n[1] + g[2] * n[2]);
    }
    CHECK(flux == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("source derivative against finite differences, boundary zero, leading antisymmetry") {
  std::mt19937_64 rng(3);
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const Point x = random_interior(rng), xi = random_interior(rng, 0.8);
    if (distance(x, xi) < 0.1) continue;
    for (int s = 1; s <= 3; ++s) {
      std::array<double, 3> e{0, 0, 0};
      e[static_cast<std::size_t>(s - 1)] = 1.0;
      const double fd = (green_ball(x, shifted(xi, e, h)) - green_ball(x, shifted(xi, e, -h))) / (2 * h);
      const double an = green_ball_source_derivative(x, xi, s);
      CHECK(std::abs(an - fd) <= 1e-6 * std::max(1.0, std::abs(an)));
    }
    CHECK(std::abs(green_ball_source_derivative(random_on_sphere(rng), xi, 2)) <= 1e-10);
  }
  // Near the pole ∂G/∂ξ_s ≈ C_3 (x_s − ξ_s)/|x − ξ|³, odd under x − ξ → −(x − ξ).
  const Point xi = Point::in_ball(0.1, 0.1, 0.1);
  const std::array<double, 3> dir{0.6, 0.0, 0.8};
  const double r = 1e-4;
  const double plus = green_ball_source_derivative(shifted(xi, dir, r), xi, 1);
  const double minus = green_ball_source_derivative(shifted(xi, dir, -r), xi, 1);
  const double leading = kFundamentalConstant3 * dir[0] * r / (r * r * r);
  CHECK(plus == Approx(leading).epsilon(1e-6));
  CHECK(minus == Approx(-leading).epsilon(1e-6));
}

TEST_CASE("interval Green function: values, boundary, unit slope jump") {
  CHECK(green_interval(0.5, 0.25) == Approx(-0.125).epsilon(1e-15));
  CHECK(green_interval(0.0, 0.3) == 0.0);
  CHECK(green_interval(1.0, 0.3) == 0.0);
  const double t = 0.37, h = 1e-6;
  const double left = (green_interval(t, t) - green_interval(t - h, t)) / h;
  const double right = (green_interval(t + h, t) - green_interval(t, t)) / h;
  CHECK(right - left == Approx(1.0).epsilon(1e-9));
  CHECK(green_interval(t - 1e-12, t) == Approx(green_interval(t + 1e-12, t)).epsilon(1e-10));
  // Linear on each side.
  CHECK(green_interval(0.1, t) + green_interval(0.3, t) == Approx(2 * green_interval(0.2, t)).epsilon(1e-14));
  CHECK(green_interval_source_derivative(0.2, t) ==
        Approx((green_interval(0.2, t + h) - green_interval(0.2, t - h)) / (2 * h)).epsilon(1e-8));
}

TEST_CASE("kernel bundle rejects boundary punctures and evaluates the family") {
  CHECK_THROWS_AS(KernelBundle(Point::on_line(1.0)), NumericalError);
  CHECK_THROWS_AS(KernelBundle(Point::in_ball(1.0, 0, 0)), NumericalError);
  const KernelBundle kb(Point::in_ball(0.1, 0.2, 0.3));
  CHECK(kb.singular_count() == 4);
  const Point x = Point::in_ball(-0.3, 0.2, 0.0);
  CHECK(kb.phi(0, x) == Approx(green_ball(x, kb.puncture())).epsilon(1e-15));
  CHECK(kb.phi(2, x) == Approx(green_ball_source_derivative(x, kb.puncture(), 2)).epsilon(1e-15));
  CHECK_THROWS_AS(kb.phi(1, kb.puncture()), NumericalError);
  const double h = 1e-6;
  for (int j = 0; j <= 3; ++j) {
    const auto g = kb.phi_gradient(j, x);
    for (int s = 0; s < 3; ++s) {
      std::array<double, 3> e{0, 0, 0};
      e[static_cast<std::size_t>(s)] = 1.0;
      const double fd = (kb.phi(j, shifted(x, e, h)) - kb.phi(j, shifted(x, e, -h))) / (2 * h);
      CHECK(g[static_cast<std::size_t>(s)] == Approx(fd).epsilon(1e-6));
    }
  }
}
