#include "pointdelta/basis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include <boost/math/tools/roots.hpp>

namespace pdelta::basis {

namespace {

using std::numbers::pi;

double sph_j(int l, double z) {
  if (z == 0.0) return l == 0 ? 1.0 : 0.0;
  return std::sph_bessel(static_cast<unsigned>(l), z);
}

// d/dz j_l(z) = j_{l−1}(z) − (l + 1)/z · j_l(z); j_0' = −j_1.
double sph_j_derivative(int l, double z) {
  if (l == 0) return -sph_j(1, z);
  if (z == 0.0) return l == 1 ? 1.0 / 3.0 : 0.0;
  return sph_j(l - 1, z) - (l + 1.0) / z * sph_j(l, z);
}

// Incremental bracketing scan; zeros of j_l are separated by more than π/2, so a
// step of 0.05 brackets each one.
struct ZeroScan {
  std::vector<double> zeros;
  double a = -1.0;
  double fa = 0.0;
};

void extend_zeros(int l, ZeroScan& s, int count) {
  constexpr double step = 0.05;
  if (s.a < 0.0) {
    s.a = std::max(0.5, 0.5 * l);
    s.fa = sph_j(l, s.a);
  }
  while (static_cast<int>(s.zeros.size()) < count) {
    const double b = s.a + step;
    const double fb = sph_j(l, b);
    if (s.fa == 0.0) {
      s.zeros.push_back(s.a);
    } else if (s.fa * fb < 0.0) {
      boost::uintmax_t iters = 200;
      auto tol = [](double lo, double hi) { return std::abs(hi - lo) <= 1e-15 * std::abs(lo); };
      auto [lo, hi] = boost::math::tools::toms748_solve([l](double z) { return sph_j(l, z); }, s.a, b, s.fa, fb,
                                                       tol, iters);
      s.zeros.push_back(0.5 * (lo + hi));
    }
    s.a = b;
    s.fa = fb;
  }
}

std::mutex zero_mutex;

// Associated Legendre P_l^m(x) without the Condon–Shortley phase, and dP/dθ.
double legendre(int l, int m, double x) {
  if (m > l) return 0.0;
  return std::assoc_legendre(static_cast<unsigned>(l), static_cast<unsigned>(m), x);
}

double harmonic_norm(int l, int m) {
  const double ratio = std::exp(std::lgamma(l - m + 1.0) - std::lgamma(l + m + 1.0));
  return std::sqrt((2.0 * l + 1.0) / (4.0 * pi) * ratio);
}

// (Θ(θ), dΘ/dθ) of the θ-factor of Y_lm, and the φ-factor with its derivative.
struct HarmonicParts {
  double theta_part, dtheta_part, phi_part, dphi_part;
};

HarmonicParts harmonic_parts(int l, int m, double theta, double phi) {
  const int am = std::abs(m);
  const double ct = std::cos(theta), st = std::sin(theta);
  const double k = harmonic_norm(l, am) * (m == 0 ? 1.0 : std::numbers::sqrt2);
  const double p = legendre(l, am, ct);
  // (x² − 1) dP_l^m/dx = l x P_l^m − (l + m) P_{l−1}^m, and dP/dθ = −sin θ dP/dx.
  double dp = 0.0;
  if (st > 1e-300) dp = (l * ct * p - (l + am) * legendre(l - 1, am, ct)) / st;
  HarmonicParts h{k * p, k * dp, 1.0, 0.0};
  if (m > 0) {
    h.phi_part = std::cos(am * phi);
    h.dphi_part = -am * std::sin(am * phi);
  } else if (m < 0) {
    h.phi_part = std::sin(am * phi);
    h.dphi_part = am * std::cos(am * phi);
  }
  return h;
}

}  // namespace

double bessel_zero(int l, int n) {
  if (l < 0 || l > kMaxBesselOrder || n < 1 || n > kMaxBesselZero)
    throw NumericalError(ErrorKind::ZeroTableExhausted, "zero table exhausted");
  static std::map<int, ZeroScan> table;
  std::lock_guard lock(zero_mutex);
  auto& scan = table[l];
  extend_zeros(l, scan, n);
  return scan.zeros[static_cast<std::size_t>(n - 1)];
}

double real_spherical_harmonic(int l, int m, double theta, double phi) {
  const HarmonicParts h = harmonic_parts(l, m, theta, phi);
  return h.theta_part * h.phi_part;
}

Eigenpair interval_eigenpair(int n) {
  if (n < 1) throw NumericalError(ErrorKind::InvalidArgument, "eigen index must be positive");
  Eigenpair e;
  e.n = n;
  e.wavenumber = n * pi;
  e.mu = -e.wavenumber * e.wavenumber;
  return e;
}

Eigenpair ball_eigenpair(int l, int m, int n) {
  if (std::abs(m) > l) throw NumericalError(ErrorKind::InvalidArgument, "|m| must not exceed l");
  Eigenpair e;
  e.l = l;
  e.m = m;
  e.n = n;
  e.wavenumber = bessel_zero(l, n);
  e.mu = -e.wavenumber * e.wavenumber;
  // ∫_0^1 j_l(z r)² r² dr = j_{l+1}(z)²/2 at a zero z of j_l.
  e.norm = std::numbers::sqrt2 / std::abs(sph_j(l + 1, e.wavenumber));
  return e;
}

double eigenfunction_value(int dim, const Eigenpair& e, const Point& x) {
  if (dim == 1) return std::numbers::sqrt2 * std::sin(e.wavenumber * x[0]);
  const double r = x.norm();
  if (r == 0.0) return e.l == 0 ? e.norm * harmonic_norm(0, 0) : 0.0;
  const double theta = std::acos(std::clamp(x[2] / r, -1.0, 1.0));
  const double phi = std::atan2(x[1], x[0]);
  return e.norm * sph_j(e.l, e.wavenumber * r) * real_spherical_harmonic(e.l, e.m, theta, phi);
}

std::array<double, 3> eigenfunction_gradient(int dim, const Eigenpair& e, const Point& x) {
  if (dim == 1) return {std::numbers::sqrt2 * e.wavenumber * std::cos(e.wavenumber * x[0]), 0.0, 0.0};
  const double r = x.norm();
  const double rho = std::hypot(x[0], x[1]);
  if (r < 1e-12 || rho < 1e-12 * std::max(r, 1e-300)) {
    // On the polar axis the spherical-coordinate formula degenerates; use a
    // fourth-order central difference instead.
    std::array<double, 3> g{};
    const double h = 1e-4;
    for (int i = 0; i < 3; ++i) {
      std::array<double, 3> dir{0.0, 0.0, 0.0};
      dir[static_cast<std::size_t>(i)] = 1.0;
      const auto f = [&](double t) { return eigenfunction_value(dim, e, shifted(x, dir, t)); };
      g[static_cast<std::size_t>(i)] = (f(-2 * h) - 8 * f(-h) + 8 * f(h) - f(2 * h)) / (12 * h);
    }
    return g;
  }
  const double theta = std::acos(std::clamp(x[2] / r, -1.0, 1.0));
  const double phi = std::atan2(x[1], x[0]);
  const double st = rho / r, ct = x[2] / r;
  const double cp = x[0] / rho, sp = x[1] / rho;
  const HarmonicParts h = harmonic_parts(e.l, e.m, theta, phi);
  const double z = e.wavenumber;
  const double radial = sph_j(e.l, z * r);
  const double d_radial = z * sph_j_derivative(e.l, z * r);
  const double y = h.theta_part * h.phi_part;
  const double d_r = e.norm * d_radial * y;
  const double d_theta = e.norm * radial * h.dtheta_part * h.phi_part / r;
  const double d_phi = e.norm * radial * h.theta_part * h.dphi_part / (r * st);
  // r̂ = (st cp, st sp, ct), θ̂ = (ct cp, ct sp, −st), φ̂ = (−sp, cp, 0)
  return {d_r * st * cp + d_theta * ct * cp - d_phi * sp,
          d_r * st * sp + d_theta * ct * sp + d_phi * cp,
          d_r * ct - d_theta * st};
}

SpectralBasis::SpectralBasis(int dim, int cutoff) : dim_(dim) {
  require_dimension(dim);
  if (cutoff < 1) throw NumericalError(ErrorKind::InvalidArgument, "basis cutoff must be positive");
  if (dim == 1) {
    for (int n = 1; n <= cutoff; ++n) entries_.push_back(interval_eigenpair(n));
  } else {
    struct Candidate {
      double z;
      int l, m, n;
    };
    std::vector<Candidate> cands;
    // Every j_l with l ≤ 25 has its first zero above l; collect enough zeros per l
    // to cover the first `cutoff` eigenvalues.
    double zmax = bessel_zero(0, 1);
    {
      // Weyl: N(z) ≈ 2 z³ / (9π); pad generously.
      zmax = std::max(zmax, 1.5 * std::cbrt(9.0 * pi * cutoff / 2.0) + 4.0);
    }
    for (int l = 0; l <= kMaxBesselOrder; ++l) {
      for (int n = 1; n <= kMaxBesselZero; ++n) {
        const double z = bessel_zero(l, n);
        if (z > zmax) break;
        for (int m = -l; m <= l; ++m) cands.push_back({z, l, m, n});
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      return std::tie(a.z, a.l, a.m, a.n) < std::tie(b.z, b.l, b.m, b.n);
    });
    if (static_cast<int>(cands.size()) < cutoff)
      throw NumericalError(ErrorKind::ZeroTableExhausted, "zero table exhausted");
    for (int k = 0; k < cutoff; ++k) {
      const auto& c = cands[static_cast<std::size_t>(k)];
      entries_.push_back(ball_eigenpair(c.l, c.m, c.n));
    }
  }
  for (int k = 0; k < static_cast<int>(entries_.size()); ++k) entries_[static_cast<std::size_t>(k)].index = k + 1;
}

double phi_fourier_coefficient(const SpectralBasis& basis, const Point& x0, int j, int k, double kappa) {
  if (j < 0 || j > basis.dim()) throw NumericalError(ErrorKind::InvalidArgument, "phi index out of range");
  const double mu = basis.mu(k);
  if (j == 0) return kappa * basis.value(k, x0) / mu;
  return kappa * basis.gradient(k, x0)[static_cast<std::size_t>(j - 1)] / mu;
}

}  // namespace pdelta::basis
