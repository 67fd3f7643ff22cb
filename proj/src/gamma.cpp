#include "pointdelta/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pointdelta/quadrature.hpp"

namespace pdelta::gamma {

namespace {

double distance_to_boundary(const Point& x0) {
  if (x0.dim == 1) return std::min(x0[0], 1.0 - x0[0]);
  return 1.0 - x0.norm();
}

// Directional derivative of h at p along unit vector dir.
double directional_derivative(const Field& h, const Point& p, const std::array<double, 3>& dir,
                              double step) {
  if (h.gradient) {
    const auto g = h.gradient(p);
    return g[0] * dir[0] + g[1] * dir[1] + g[2] * dir[2];
  }
  const double fm2 = h.value(shifted(p, dir, -2.0 * step));
  const double fm1 = h.value(shifted(p, dir, -step));
  const double fp1 = h.value(shifted(p, dir, step));
  const double fp2 = h.value(shifted(p, dir, 2.0 * step));
  return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * step);
}

}  // namespace

std::vector<double> geometric_schedule(double delta0, int levels) {
  if (!(delta0 > 0.0) || levels < 1)
    throw NumericalError(ErrorKind::InvalidArgument, "schedule needs delta0 > 0 and levels >= 1");
  std::vector<double> r(static_cast<std::size_t>(levels));
  for (int k = 0; k < levels; ++k) r[static_cast<std::size_t>(k)] = std::ldexp(delta0, -k);
  return r;
}

double surface_gamma(const Field& h, int j, const Point& x0, double delta, int order) {
  const int d = x0.dim;
  require_dimension(d);
  if (j < 0 || j > d) throw NumericalError(ErrorKind::InvalidArgument, "gamma index out of range");
  if (order < 4) throw NumericalError(ErrorKind::InvalidArgument, "sphere quadrature order must be >= 4");
  if (!(delta > 0.0) || delta >= distance_to_boundary(x0))
    throw NumericalError(ErrorKind::SphereLeavesDomain, "puncture sphere leaves domain");
  const double fd_step = 0.01 * delta;

  if (d == 1) {
    const Point right = shifted(x0, {1.0, 0.0, 0.0}, delta);
    const Point left = shifted(x0, {1.0, 0.0, 0.0}, -delta);
    if (j == 0) {
      const double dr = directional_derivative(h, right, {1.0, 0.0, 0.0}, fd_step);
      const double dl = directional_derivative(h, left, {1.0, 0.0, 0.0}, fd_step);
      return -(dr - dl);
    }
    return -(h.value(right) - h.value(left));
  }

  const quad::SphereRule& rule = quad::sphere_rule(order);
  const double area = delta * delta;
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.directions.size(); ++q) {
    const auto& eta = rule.directions[q];
    const Point t = shifted(x0, eta, delta);
    if (j == 0) {
      sum += rule.weights[q] * directional_derivative(h, t, eta, fd_step);
    } else {
      sum -= rule.weights[q] * eta[static_cast<std::size_t>(j - 1)] * h.value(t);
    }
  }
  return j == 0 ? -area * sum : d * area * sum;
}

GammaLimit gamma_limit(const Field& h, int j, const Point& x0, std::span<const double> radii, int order) {
  if (radii.empty()) throw NumericalError(ErrorKind::InvalidArgument, "empty radius schedule");
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (!(radii[k] < radii[k - 1]))
      throw NumericalError(ErrorKind::InvalidArgument, "radius schedule must be strictly decreasing");
  std::vector<double> samples;
  samples.reserve(radii.size());
  for (double r : radii) samples.push_back(surface_gamma(h, j, x0, r, order));
  const quad::Extrapolated ex = quad::richardson(samples, 1, 4);
  if (ex.increments.size() >= 2) {
    const double first = ex.increments.front();
    const double last = ex.increments.back();
    const double scale = std::max(1.0, std::abs(ex.value));
    if (last > first && last > 1e-6 * scale)
      throw NumericalError(ErrorKind::GammaNotStable,
                           "gamma limit does not stabilize (j=" + std::to_string(j) + ")");
  }
  return GammaLimit{ex.value, ex.error};
}

GammaVector raw_gamma_vector(const Field& h, const Point& x0, const GammaOptions& opts) {
  const auto radii = geometric_schedule(opts.delta0, opts.levels);
  GammaVector out;
  for (int j = 0; j <= x0.dim; ++j) {
    const GammaLimit g = gamma_limit(h, j, x0, radii, opts.order);
    out.values.push_back(g.value);
    out.err.push_back(g.err);
  }
  return out;
}

GammaVector to_trace_coordinates(GammaVector raw) {
  if (!raw.values.empty()) raw.values[0] = -raw.values[0];
  return raw;
}

GammaVector gamma_vector(const Field& h, const Point& x0, const GammaOptions& opts) {
  return to_trace_coordinates(raw_gamma_vector(h, x0, opts));
}

BetaVector beta_vector(const Field& v0, const Point& x0) {
  BetaVector out;
  out.values.push_back(v0.value(x0));
  if (v0.gradient) {
    const auto g = v0.gradient(x0);
    for (int i = 0; i < x0.dim; ++i) out.values.push_back(g[static_cast<std::size_t>(i)]);
    return out;
  }
  constexpr double step = 1e-5;
  for (int i = 0; i < x0.dim; ++i) {
    std::array<double, 3> e{0.0, 0.0, 0.0};
    e[static_cast<std::size_t>(i)] = 1.0;
    out.values.push_back((v0.value(shifted(x0, e, step)) - v0.value(shifted(x0, e, -step))) / (2.0 * step));
  }
  return out;
}

std::complex<double> boundary_form(const DecomposedParts& w, const DecomposedParts& v) {
  const std::size_t n = w.gamma.size();
  if (n == 0 || w.beta.size() != n || v.gamma.size() != n || v.beta.size() != n)
    throw NumericalError(ErrorKind::DecompositionRequired, "decomposition required");
  std::complex<double> j{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i)
    j += w.gamma[i] * std::conj(v.beta[i]) - w.beta[i] * std::conj(v.gamma[i]);
  return j;
}

}  // namespace pdelta::gamma
