#include "pointdelta/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace pdelta::quad {

namespace {

Rule1D build_gauss_legendre(int n) {
  Rule1D r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 0 ? 1.0 : (n == 1 ? x : p1);
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[static_cast<std::size_t>(i)] = x;
    r.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

std::mutex cache_mutex;

}  // namespace

const Rule1D& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  static std::map<int, Rule1D> cache;
  std::lock_guard lock(cache_mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_gauss_legendre(n)).first;
  return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b, int n, int panels) {
  const Rule1D& r = gauss_legendre(n);
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(mid + 0.5 * h * r.nodes[i]);
    sum += 0.5 * h * s;
  }
  return sum;
}

const SphereRule& sphere_rule(int order) {
  if (order < 1) throw std::invalid_argument("sphere_rule: order must be positive");
  static std::map<int, SphereRule> cache;
  const Rule1D& gl = gauss_legendre(order);
  std::lock_guard lock(cache_mutex);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  SphereRule rule;
  const int nphi = 2 * order;
  const double dphi = 2.0 * std::numbers::pi / nphi;
  for (int i = 0; i < order; ++i) {
    const double ct = gl.nodes[static_cast<std::size_t>(i)];
    const double st = std::sqrt(1.0 - ct * ct);
    for (int k = 0; k < nphi; ++k) {
      const double phi = (k + 0.5) * dphi;
      rule.directions.push_back({st * std::cos(phi), st * std::sin(phi), ct});
      rule.weights.push_back(gl.weights[static_cast<std::size_t>(i)] * dphi);
    }
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

Extrapolated richardson(std::span<const double> values, int first_power, int max_order) {
  const std::size_t n = values.size();
  if (n == 0) throw std::invalid_argument("richardson: empty sequence");
  Extrapolated out{values.back(), 0.0, {}};
  for (std::size_t k = 1; k < n; ++k) out.increments.push_back(std::abs(values[k] - values[k - 1]));
  if (n == 1) return out;

  // Neville-style table; row k holds extrapolations ending at sample k.
  std::vector<double> prev(values.begin(), values.end());
  double best = values.back();
  double best_prev = values[n - 2];
  const int orders = std::min<int>(max_order, static_cast<int>(n) - 1);
  for (int m = 1; m <= orders; ++m) {
    const double factor = std::ldexp(1.0, first_power + m - 1) - 1.0;
    std::vector<double> cur(n, 0.0);
    for (std::size_t k = static_cast<std::size_t>(m); k < n; ++k)
      cur[k] = prev[k] + (prev[k] - prev[k - 1]) / factor;
    best_prev = best;
    best = cur[n - 1];
    prev = std::move(cur);
  }
  out.value = best;
  out.error = std::abs(best - best_prev);
  return out;
}

}  // namespace pdelta::quad
