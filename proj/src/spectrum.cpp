#include "pointdelta/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace pdelta::spectrum {

using perturbation::PerturbedOperator;

namespace {

constexpr double kCollision = 1e-8;

double arg_step(cplx a, cplx b) { return std::arg(b / a); }

// Accumulated argument change of f along [a, b]. A step is accepted once it turns by
// less than π/4 and agrees with the sum over its two halves.
double segment_argument(const std::function<cplx(cplx)>& f, cplx a, cplx fa, cplx b, cplx fb, int depth) {
  const double step = arg_step(fa, fb);
  const cplx m = 0.5 * (a + b);
  const cplx fm = f(m);
  const double left = arg_step(fa, fm), right = arg_step(fm, fb);
  if (depth > 40 || (std::abs(step) <= std::numbers::pi / 4 && std::abs(left + right - step) <= 1e-6)) return left + right;
  return segment_argument(f, a, fa, m, fm, depth + 1) + segment_argument(f, m, fm, b, fb, depth + 1);
}

struct Group {
  double mu;
  int count;
};

std::vector<Group> group_eigenvalues(const Eigen::VectorXd& mu, const std::vector<int>& include) {
  std::vector<double> values;
  for (int n = 0; n < mu.size(); ++n)
    if (include.empty() || include[static_cast<std::size_t>(n)]) values.push_back(mu(n));
  std::sort(values.begin(), values.end());
  std::vector<Group> groups;
  for (double v : values) {
    if (!groups.empty() && std::abs(v - groups.back().mu) <= 1e-9 * std::max(1.0, std::abs(v)))
      ++groups.back().count;
    else
      groups.push_back({v, 1});
  }
  return groups;
}

bool is_real_table(const perturbation::PerturbationK& K) { return K.C.imag().isZero(0.0); }

}  // namespace

std::vector<Eigenvalue> SpectrumResult::merged() const {
  std::vector<Eigenvalue> all = roots;
  all.insert(all.end(), retained.begin(), retained.end());
  std::sort(all.begin(), all.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() > b.lambda.real();
    return a.lambda.imag() > b.lambda.imag();
  });
  return all;
}

int winding_number(const std::function<cplx(cplx)>& f, const std::vector<cplx>& polygon) {
  double total = 0.0;
  const std::size_t n = polygon.size();
  std::vector<cplx> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = f(polygon[i]);
  constexpr int pieces = 16;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    cplx a = polygon[i], fa = values[i];
    for (int k = 1; k <= pieces; ++k) {
      const cplx b = k == pieces ? polygon[j] : polygon[i] + (polygon[j] - polygon[i]) * (double(k) / pieces);
      const cplx fb = k == pieces ? values[j] : f(b);
      total += segment_argument(f, a, fa, b, fb, 0);
      a = b;
      fa = fb;
    }
  }
  return static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
}

int local_order(const std::function<cplx(cplx)>& f, double at, double scale) {
  const double e1 = 1e-3 * scale, e2 = 1e-5 * scale;
  const double a1 = std::abs(f(at + e1)), a2 = std::abs(f(at + e2));
  if (a1 == 0.0 || a2 == 0.0) return 0;
  return static_cast<int>(std::lround(std::log(a2 / a1) / std::log(e2 / e1)));
}

namespace {

std::vector<cplx> circle(cplx c, double r, int n = 32) {
  std::vector<cplx> pts;
  for (int k = 0; k < n; ++k) pts.push_back(c + std::polar(r, 2 * std::numbers::pi * k / n));
  return pts;
}

std::vector<cplx> rectangle(double x0, double x1, double y0, double y1) {
  return {cplx(x0, y0), cplx(x1, y0), cplx(x1, y1), cplx(x0, y1)};
}

void complex_roots(const std::function<cplx(cplx)>& f, double x0, double x1, double y0, double y1, int depth,
                   double tol, std::vector<Eigenvalue>& out) {
  const int count = winding_number(f, rectangle(x0, x1, y0, y1));
  if (count <= 0) return;
  if (count == 1 || depth > 12) {
    cplx z(0.5 * (x0 + x1), 0.5 * (y0 + y1));
    const double h = 1e-7 * std::max(1.0, std::abs(z));
    for (int it = 0; it < 100; ++it) {
      const cplx fz = f(z);
      const cplx df = (f(z + h) - f(z - h)) / (2 * h);
      const cplx dz = fz / df;
      z -= dz;
      if (std::abs(dz) <= tol * std::max(1.0, std::abs(z))) break;
    }
    if (z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1) {
      out.push_back({z, count, ""});
      return;
    }
    if (depth > 12) return;
  }
  const double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
  complex_roots(f, x0, xm, y0, ym, depth + 1, tol, out);
  complex_roots(f, xm, x1, y0, ym, depth + 1, tol, out);
  complex_roots(f, x0, xm, ym, y1, depth + 1, tol, out);
  complex_roots(f, xm, x1, ym, y1, depth + 1, tol, out);
}

}  // namespace

SpectrumResult perturbed_spectrum(const PerturbedOperator& op, double lo, double hi, const SpectrumOptions& opts) {
  if (!(lo < hi)) throw NumericalError(ErrorKind::InvalidArgument, "empty spectrum window");
  const auto& model = op.model();
  const auto& K = op.perturbation();
  const Eigen::VectorXd& mu = model.mu();
  const auto delta = [&](cplx z) { return op.determinant(z); };

  SpectrumResult result;
  const double mu_max = mu.cwiseAbs().maxCoeff();
  if (std::max(std::abs(lo), std::abs(hi)) > 0.5 * mu_max)
    result.warnings.push_back("window reaches the basis cutoff; increase M");

  std::vector<int> active(static_cast<std::size_t>(model.size()));
  for (int n = 0; n < model.size(); ++n) active[static_cast<std::size_t>(n)] = K.C.col(n).isZero(0.0) ? 0 : 1;
  const auto all_groups = group_eigenvalues(mu, {});
  const auto poles = group_eigenvalues(mu, active);

  std::vector<double> breaks{lo};
  for (const auto& p : poles)
    if (p.mu > lo && p.mu < hi) breaks.push_back(p.mu);
  breaks.push_back(hi);
  auto is_pole = [&](double x) {
    return std::any_of(poles.begin(), poles.end(), [&](const Group& g) { return g.mu == x; });
  };

  std::vector<double> real_roots;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double a = breaks[s], b = breaks[s + 1], L = b - a;
    std::vector<double> xs;
    const int n = std::max(2, opts.samples_per_gap);
    for (int i = 0; i <= n; ++i) xs.push_back(a + L * i / n);
    for (int k = 2; k <= 9; ++k) {
      xs.push_back(a + L * std::pow(10.0, -k));
      xs.push_back(b - L * std::pow(10.0, -k));
    }
    std::sort(xs.begin(), xs.end());
    if (is_pole(a)) xs.erase(xs.begin());
    if (is_pole(b)) xs.pop_back();
    std::vector<double> fs;
    for (double x : xs) fs.push_back(delta(x).real());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (fs[i] == 0.0) {
        real_roots.push_back(xs[i]);
        continue;
      }
      if (i + 1 < xs.size() && fs[i + 1] != 0.0 && std::signbit(fs[i]) != std::signbit(fs[i + 1])) {
        boost::uintmax_t iters = 200;
        const auto tol = [&](double u, double v) {
          return std::abs(u - v) <= opts.tol * std::max(1.0, std::abs(u));
        };
        const auto br = boost::math::tools::toms748_solve([&](double x) { return delta(x).real(); }, xs[i], xs[i + 1],
                                                          fs[i], fs[i + 1], tol, iters);
        real_roots.push_back(0.5 * (br.first + br.second));
      }
    }
  }

  // Roots sitting on an unperturbed eigenvalue are accounted for by its order.
  auto nearest_group = [&](double x) {
    const Group* best = nullptr;
    for (const auto& g : all_groups)
      if (!best || std::abs(g.mu - x) < std::abs(best->mu - x)) best = &g;
    return best;
  };
  for (double r : real_roots) {
    const Group* g = nearest_group(r);
    const bool on_mu = g && std::abs(g->mu - r) <= kCollision;
    const bool on_pole = on_mu && is_pole(g->mu);
    if (on_mu && !on_pole) continue;
    double radius = 1e-2 * (1.0 + std::abs(r));
    if (g) radius = std::min(radius, 0.5 * std::abs(g->mu - r));
    for (double q : real_roots)
      if (q != r) radius = std::min(radius, 0.5 * std::abs(q - r));
    Eigenvalue e{cplx(r, 0.0), 1, ""};
    if (on_pole) {
      e.flag = "root-pole collision; refine M";
      result.warnings.push_back(e.flag);
    } else if (radius > 0.0) {
      e.multiplicity = std::max(1, winding_number(delta, circle(r, radius)));
    }
    result.roots.push_back(e);
  }

  for (std::size_t i = 0; i < all_groups.size(); ++i) {
    const auto& g = all_groups[i];
    if (g.mu <= lo || g.mu >= hi) continue;
    double gap = std::abs(g.mu);
    if (i > 0) gap = std::min(gap, g.mu - all_groups[i - 1].mu);
    if (i + 1 < all_groups.size()) gap = std::min(gap, all_groups[i + 1].mu - g.mu);
    const int ord = local_order(delta, g.mu, gap);
    if (g.count + ord > 0) result.retained.push_back({cplx(g.mu, 0.0), g.count + ord, ""});
  }

  if (opts.complex_search) {
    const double H = opts.imag_max > 0.0 ? opts.imag_max : hi - lo;
    const double y0 = 1e-3 * (hi - lo);
    std::vector<Eigenvalue> found;
    complex_roots(delta, lo, hi, y0, H, 0, opts.tol, found);
    if (is_real_table(K)) {
      const std::size_t upper = found.size();
      for (std::size_t i = 0; i < upper; ++i) found.push_back({std::conj(found[i].lambda), found[i].multiplicity, ""});
    } else {
      complex_roots(delta, lo, hi, -H, -y0, 0, opts.tol, found);
    }
    result.roots.insert(result.roots.end(), found.begin(), found.end());
  }

  std::sort(result.roots.begin(), result.roots.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() > b.lambda.real();
    return a.lambda.imag() > b.lambda.imag();
  });
  std::sort(result.retained.begin(), result.retained.end(),
            [](const Eigenvalue& a, const Eigenvalue& b) { return a.lambda.real() > b.lambda.real(); });
  return result;
}

std::vector<CutoffExtrapolation> extrapolate_cutoff(const std::vector<std::vector<double>>& levels) {
  if (levels.size() != 3 || levels[0].size() != levels[1].size() || levels[1].size() != levels[2].size())
    throw NumericalError(ErrorKind::InvalidArgument, "cutoff extrapolation needs three equally long levels");
  std::vector<CutoffExtrapolation> out;
  for (std::size_t i = 0; i < levels[2].size(); ++i) {
    const double a = levels[0][i], b = levels[1][i], c = levels[2][i];
    CutoffExtrapolation e;
    e.value = e.finest = c;
    const double d1 = b - a, d2 = c - b;
    // Differences at roundoff level, or not shrinking geometrically: keep the finest value.
    const double noise = 1e-13 * std::max(1.0, std::abs(c));
    if (std::abs(d2) > noise && std::abs(d1) > std::abs(d2) && std::signbit(d1) == std::signbit(d2)) {
      e.order = std::log2(d1 / d2);
      e.correction = d2 / (std::exp2(e.order) - 1.0);
      e.value = c + e.correction;
    }
    out.push_back(e);
  }
  return out;
}

Theorem52Report theorem52_check(const perturbation::SpectralModel& model, const perturbation::PerturbationK& K, int N,
                                double tol) {
  if (N < 1 || N > model.size()) throw NumericalError(ErrorKind::InvalidArgument, "N outside the basis");
  const PerturbedOperator op(model, K.restricted(1));
  Theorem52Report rep;
  rep.N = N;
  rep.mu_N = model.mu()(N - 1);

  double below = -std::numeric_limits<double>::infinity(), above = 0.0;
  for (int n = 0; n < model.size(); ++n) {
    const double m = model.mu()(n);
    if (std::abs(m - rep.mu_N) <= 1e-9 * std::abs(rep.mu_N)) continue;
    if (m < rep.mu_N) below = std::max(below, m);
    if (m > rep.mu_N) above = std::min(above == 0.0 ? m : above, m);
  }
  if (!std::isfinite(below)) below = 2 * rep.mu_N;
  const double lo = 0.5 * (below + rep.mu_N), hi = 0.5 * (above + rep.mu_N);

  const double omega = model.omega_at_puncture()(N - 1);
  const cplx c0N = op.perturbation().C(0, N - 1);
  if (std::abs(omega) <= 1e-12)
    rep.branch = "node";
  else if (c0N == 0.0)
    rep.branch = "C0N=0";
  else
    rep.branch = "generic";

  const auto spec = perturbed_spectrum(op, lo, hi);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : spec.merged())
    if (std::abs(e.lambda.real() - rep.mu_N) < std::abs(best - rep.mu_N)) best = e.lambda.real();
  rep.nearest = best;
  rep.deviation = std::abs(best - rep.mu_N);

  const double probe = c0N == 0.0 ? rep.mu_N : rep.mu_N + 1e-6 * (hi - lo);
  rep.eigvec_coefficient = std::abs(rep.mu_N * c0N / op.delta01(probe));
  rep.holds = rep.branch == "generic" ? rep.deviation > 1e-4 : rep.deviation <= tol;
  return rep;
}

}  // namespace pdelta::spectrum
