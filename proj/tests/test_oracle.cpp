#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pointdelta/kernels.hpp"
#include "pointdelta/oracle.hpp"

using namespace pdelta;
using namespace pdelta::oracle;
constexpr double pi = std::numbers::pi;

namespace {

double secular(double lambda, double k, double x0) {
  if (lambda < 0) {
    const double s = std::sqrt(-lambda);
    return s * std::sin(s) + k * std::sin(s * x0) * std::sin(s * (1 - x0));
  }
  const double t = std::sqrt(lambda);
  return t * std::sinh(t) + k * std::sinh(t * x0) * std::sinh(t * (1 - x0));
}

}  // namespace

TEST_CASE("report arithmetic") {
  const auto r = make_report("q", 1.5, 2.0, "m");
  CHECK(r.abs_err == 0.5);
  CHECK(r.rel_err == 0.25);
  CHECK(r.quantity == "q");
}

TEST_CASE("transcendental spectrum") {
  const auto free = delta_well_spectrum_1d(0.0, 0.3, 6);
  REQUIRE(free.size() == 6);
  for (int n = 1; n <= 6; ++n) CHECK(free[n - 1] == doctest::Approx(-n * n * pi * pi).epsilon(1e-13));

  for (double k : {-3.0, 1.0, 5.0, 40.0}) {
    const auto mid = delta_well_spectrum_1d(k, 0.5, 8);
    for (int m = 1; m <= 3; ++m) {
      const double even = -(2 * m * pi) * (2 * m * pi);
      CHECK(std::any_of(mid.begin(), mid.end(), [&](double v) { return std::abs(v - even) <= 1e-9 * std::abs(even); }));
    }
  }

  for (double k : {-100.0, -7.0, 0.5, 12.0}) {
    for (double x0 : {0.2, 0.3, 0.65}) {
      const auto ev = delta_well_spectrum_1d(k, x0, 6);
      REQUIRE(ev.size() == 6);
      CHECK(std::is_sorted(ev.rbegin(), ev.rend()));
      for (double l : ev) {
        // Scale the residual by the size of either term.
        const double s = std::sqrt(std::abs(l));
        const double scale = l < 0 ? s + std::abs(k) : (s + std::abs(k)) * std::cosh(s);
        CHECK(std::abs(secular(l, k, x0)) <= 1e-10 * scale);
      }
    }
  }
  // A strongly attractive coupling binds a positive eigenvalue near k²/4.
  CHECK(delta_well_spectrum_1d(-100.0, 0.3, 1)[0] == doctest::Approx(2500.0).epsilon(1e-8));
  CHECK(delta_well_spectrum_1d(1.0, 0.3, 1)[0] < 0.0);
}

TEST_CASE("finite differences: free case and second-order convergence") {
  const auto ev = fd_eigenvalues_1d(999, 0.0, 0.3, 3);
  for (int n = 1; n <= 3; ++n) CHECK(std::abs(ev[n - 1] + n * n * pi * pi) <= 1e-4 * n * n);

  for (double k : {0.0, 2.0}) {
    const auto exact = delta_well_spectrum_1d(k, 0.3, 2);
    // Grids with x⁰ on a node: h = 1/(N + 1) with (N + 1)·0.3 integral.
    double previous = 0.0;
    for (int N : {99, 199, 399}) {
      const double err = std::abs(fd_eigenvalues_1d(N, k, 0.3, 2)[1] - exact[1]);
      if (previous > 0.0) CHECK(std::log2(previous / err) == doctest::Approx(2.0).epsilon(0.05));
      previous = err;
    }
  }
}

TEST_CASE("finite differences bracket the transcendental roots") {
  int pairs = 0;
  for (double k : {-2.0, 0.5, 1.0, 5.0, 20.0}) {
    for (double x0 : {0.3, 0.5}) {
      const int N = x0 == 0.3 ? 999 : 1001;
      const auto fd = fd_discretize_1d(N, k, x0, 5);
      const auto exact = delta_well_spectrum_1d(k, x0, 5);
      CHECK(fd.fine_nodes == 2 * N + 1);
      for (int i = 0; i < 5; ++i) {
        CAPTURE(k);
        CAPTURE(x0);
        CHECK(std::abs(fd.eigenvalues[i] - exact[i]) <= fd.error_bar[i]);
        CHECK(fd.error_bar[i] <= 1e-3 * std::max(1.0, std::abs(exact[i])));
      }
      ++pairs;
    }
  }
  CHECK(pairs == 10);
}

TEST_CASE("volume inner products with a point singularity") {
  const auto one = [](const Point&) { return 1.0; };
  const Point c3 = Point::in_ball(0.1, 0.2, 0.3);
  CHECK(volume_inner_product(one, one, c3).value == doctest::Approx(4 * pi / 3).epsilon(1e-10));
  const auto g3 = [&](const Point& x) { return kernels::green_ball(x, c3); };
  const auto r3 = volume_inner_product(g3, one, c3);
  CHECK(std::abs(r3.value - (c3.norm2() - 1.0) / 6.0) <= 1e-8);

  const Point c1 = Point::on_line(0.3);
  const auto g1 = [](const Point& x) { return kernels::green_interval(x[0], 0.3); };
  CHECK(std::abs(volume_inner_product(g1, one, c1).value + 0.3 * 0.7 / 2) <= 1e-10);
  const auto sq = volume_inner_product(g1, g1, c1);
  CHECK(std::abs(sq.value - 0.3 * 0.3 * 0.7 * 0.7 / 3) <= 1e-10);
}

TEST_CASE("normalization constant verdict") {
  const auto v = kappa_verdict();
  CHECK(v.consistent);
  CHECK(v.kappa == 1.0);
  for (double r : v.ratios) CHECK(std::abs(r - 1.0) <= 1e-6);
  const auto w = kappa_verdict(0.61, 12, 20, 32);
  CHECK(w.consistent);
  CHECK(w.kappa == 1.0);
}

TEST_CASE("rank probe") {
  const auto zero = rank_probe([](const Eigen::VectorXcd& u) { return Eigen::VectorXcd::Zero(u.size()); }, 12, 6, 1);
  for (double s : zero) CHECK(s == 0.0);
  const auto id = rank_probe([](const Eigen::VectorXcd& u) { return u; }, 12, 6, 2);
  REQUIRE(id.size() == 6);
  for (double s : id) CHECK(s > 0.05);

  Eigen::VectorXcd a = Eigen::VectorXcd::LinSpaced(12, 1.0, 2.0), b = Eigen::VectorXcd::Ones(12);
  const auto one = rank_probe([&](const Eigen::VectorXcd& u) { return Eigen::VectorXcd(a * b.dot(u)); }, 12, 6, 3);
  CHECK(one[0] > 1.0);
  for (std::size_t i = 1; i < one.size(); ++i) CHECK(one[i] <= 1e-12 * one[0]);
  CHECK(rank_probe([](const Eigen::VectorXcd& u) { return u; }, 12, 6, 2) == id);
}
