#include "pointdelta/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "pointdelta/basis.hpp"
#include "pointdelta/gamma.hpp"
#include "pointdelta/kernels.hpp"
#include "pointdelta/oracle.hpp"
#include "pointdelta/perturbation.hpp"
#include "pointdelta/solver.hpp"
#include "pointdelta/spectrum.hpp"

namespace pdelta::commands {

using nlohmann::json;
using perturbation::cplx;

namespace {

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return s;
}

std::string fmt(double v) { return json(v).dump(); }

Point make_point(const std::vector<double>& c) {
  return c.size() == 1 ? Point::on_line(c[0]) : Point::in_ball(c[0], c[1], c[2]);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return out;
}

struct Context {
  explicit Context(const config::ExperimentConfig& c) : cfg(c) {}

  const config::ExperimentConfig& cfg;
  double kappa = 1.0;
  std::string kappa_source;
  CommandResult result;

  void fail(const std::string& msg) { result.failures.push_back(msg); }
  void warn(const std::string& msg) { result.warnings.push_back(msg); }
};

double resolve_kappa(Context& ctx) {
  if (ctx.cfg.kappa != "auto") {
    ctx.kappa_source = "config";
    return std::stod(ctx.cfg.kappa);
  }
  const auto verdict = oracle::kappa_verdict();
  ctx.kappa_source = "quadrature oracle";
  if (!verdict.consistent) {
    ctx.fail("kappa verdict inconsistent across n and quadrature orders");
    return 1.0;
  }
  return verdict.kappa;
}

void add_meta(Context& ctx, const std::string& command) {
  auto& meta = ctx.result.table.meta;
  std::ostringstream p;
  for (std::size_t i = 0; i < ctx.cfg.puncture.size(); ++i) p << (i ? " " : "") << fmt(ctx.cfg.puncture[i]);
  meta = {{"command", command},
          {"sign_convention", "Delta_x G = delta; Delta omega_n = mu_n omega_n with mu_n < 0"},
          {"kappa", fmt(ctx.kappa)},
          {"kappa_source", ctx.kappa_source},
          {"dimension", std::to_string(ctx.cfg.dimension)},
          {"puncture", p.str()},
          {"M", std::to_string(ctx.cfg.cutoff)},
          {"preset", ctx.cfg.preset},
          {"seed", std::to_string(ctx.cfg.seed)}};
}

perturbation::SpectralModel build_model(const Context& ctx, int cutoff = -1) {
  return perturbation::SpectralModel(basis::SpectralBasis(ctx.cfg.dimension, cutoff < 0 ? ctx.cfg.cutoff : cutoff),
                                     make_point(ctx.cfg.puncture), ctx.kappa);
}

perturbation::PerturbationK build_perturbation(const Context& ctx, const perturbation::SpectralModel& model) {
  const auto& p = ctx.cfg.preset;
  if (p == "delta") return perturbation::preset_delta_coupling(ctx.cfg.k, model);
  if (p == "alpha") return perturbation::preset_alpha_family(ctx.cfg.alpha, model);
  if (p == "tangential") return perturbation::preset_tangential(model, ctx.cfg.seed);
  return perturbation::zero_perturbation(model);
}

Eigen::VectorXcd source_coefficients(const Context& ctx, int size) {
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(size);
  for (const auto& [n, c] : ctx.cfg.f_modes) f(n - 1) += c;
  return f;
}

gamma::Field kernel_field(const kernels::KernelBundle& kb, int j) {
  return {[&kb, j](const Point& x) { return kb.phi(j, x); },
          [&kb, j](const Point& x) { return kb.phi_gradient(j, x); }};
}

// Grid of λ values avoiding `radius`-neighbourhoods of the given points.
std::vector<double> avoiding_grid(double lo, double hi, int count, const std::vector<double>& avoid, double radius) {
  std::vector<double> out;
  int n = count;
  while (static_cast<int>(out.size()) < count && n < 64 * count) {
    out.clear();
    for (double l : linspace(lo, hi, n)) {
      const bool near = std::any_of(avoid.begin(), avoid.end(), [&](double a) { return std::abs(a - l) < radius; });
      if (!near) out.push_back(l);
    }
    n += count;
  }
  if (static_cast<int>(out.size()) > count) {
    std::vector<double> thinned;
    for (int i = 0; i < count; ++i) thinned.push_back(out[static_cast<std::size_t>(i) * out.size() / count]);
    out = thinned;
  }
  return out;
}

std::vector<double> spectral_points(const perturbation::PerturbedOperator& op, double lo, double hi) {
  std::vector<double> pts;
  for (int n = 0; n < op.model().size(); ++n) pts.push_back(op.model().mu()(n));
  const auto spec = spectrum::perturbed_spectrum(op, lo, hi);
  for (const auto& e : spec.roots) pts.push_back(e.lambda.real());
  return pts;
}

// Interior node count ≥ N0 for which x⁰ sits on a grid node, if one exists nearby.
int aligned_nodes(double x0, int N0) {
  for (int N = N0; N < N0 + 2000; ++N) {
    const double pos = (N + 1) * x0;
    if (std::abs(pos - std::round(pos)) < 1e-9) return N;
  }
  return N0;
}

}  // namespace

void write_csv(const Table& table, std::ostream& os) {
  for (const auto& [k, v] : table.meta) os << "# " << k << "=" << v << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << csv_cell(table.columns[i]);
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << "\n";
  }
}

json to_json(const Table& table) {
  json out;
  out["meta"] = json::object();
  for (const auto& [k, v] : table.meta) out["meta"][k] = v;
  out["columns"] = table.columns;
  out["rows"] = json::array();
  for (const auto& row : table.rows) {
    json r = json::object();
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) r[table.columns[i]] = row[i];
    out["rows"].push_back(r);
  }
  return out;
}

namespace {

void cmd_gamma_check(Context& ctx) {
  auto& t = ctx.result.table;
  t.columns = {"field", "j", "value", "error", "expected", "abs_diff"};
  const Point x0 = make_point(ctx.cfg.puncture);
  const kernels::KernelBundle kb(x0);
  const int d = ctx.cfg.dimension;
  std::vector<std::pair<std::string, gamma::Field>> fields;
  fields.emplace_back("G", kernel_field(kb, 0));
  for (int s = 1; s <= d; ++s) fields.emplace_back("dG/dxi_" + std::to_string(s), kernel_field(kb, s));
  fields.emplace_back("smooth", gamma::Field{[](const Point& x) { return 1.0 + x[0] - 0.5 * x.norm2(); },
                                             [d](const Point& x) {
                                               std::array<double, 3> g{-x[0], d == 3 ? -x[1] : 0.0,
                                                                       d == 3 ? -x[2] : 0.0};
                                               g[0] += 1.0;
                                               return g;
                                             }});
  for (std::size_t f = 0; f < fields.size(); ++f) {
    const auto gv = gamma::raw_gamma_vector(fields[f].second, x0);
    for (int j = 0; j <= d; ++j) {
      double expected = 0.0;
      if (f == 0 && j == 0) expected = -1.0;
      if (f >= 1 && static_cast<int>(f) <= d && j == static_cast<int>(f)) expected = 1.0;
      const double v = gv.values[static_cast<std::size_t>(j)];
      const double diff = std::abs(v - expected);
      t.add({fields[f].first, j, v, gv.err[static_cast<std::size_t>(j)], expected, diff});
      if (diff > ctx.cfg.tol)
        ctx.fail("gamma_" + std::to_string(j) + "(" + fields[f].first + ") off by " + fmt(diff));
    }
  }
}

void cmd_green_eval(Context& ctx) {
  auto& t = ctx.result.table;
  std::mt19937_64 rng(ctx.cfg.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = std::max(ctx.cfg.grid, 1);
  if (ctx.cfg.dimension == 1) {
    t.columns = {"x", "t", "G", "G_swapped", "sym_abs"};
    std::uniform_real_distribution<double> v(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
      const double x = v(rng), s = v(rng);
      const double g = kernels::green_interval(x, s), gs = kernels::green_interval(s, x);
      t.add({x, s, g, gs, std::abs(g - gs)});
      if (std::abs(g - gs) > 1e-12) ctx.fail("interval kernel not symmetric");
    }
    for (double x : {0.0, 1.0}) {
      const double g = kernels::green_interval(x, ctx.cfg.puncture[0]);
      t.add({x, ctx.cfg.puncture[0], g, kernels::green_interval(ctx.cfg.puncture[0], x), std::abs(g)});
      if (std::abs(g) > 1e-12) ctx.fail("interval kernel does not vanish at the boundary");
    }
    return;
  }
  t.columns = {"x1", "x2", "x3", "xi1", "xi2", "xi3", "X2", "Y2", "Z2", "identity_rel", "G", "G_swapped", "sym_rel"};
  const auto random_point = [&](double rmax) {
    while (true) {
      const double a = u(rng), b = u(rng), c = u(rng);
      if (a * a + b * b + c * c < rmax * rmax) return Point::in_ball(a, b, c);
    }
  };
  for (int i = 0; i < n; ++i) {
    const Point x = random_point(0.95), xi = random_point(0.95);
    const auto q = kernels::xyz_quantities(x, xi);
    const double id = std::abs(q.x2 - (q.y2 - q.z2)) / q.x2;
    const double g = kernels::green_ball(x, xi), gs = kernels::green_ball(xi, x);
    const double sym = std::abs(g - gs) / std::abs(g);
    t.add({x[0], x[1], x[2], xi[0], xi[1], xi[2], q.x2, q.y2, q.z2, id, g, gs, sym});
    if (id > 1e-12) ctx.fail("X^2 = Y^2 - Z^2 violated: " + fmt(id));
    if (sym > 1e-10) ctx.fail("ball kernel not symmetric: " + fmt(sym));
  }
  const Point xi = make_point(ctx.cfg.puncture);
  for (int i = 0; i < n; ++i) {
    Point x = random_point(1.0);
    const double r = x.norm();
    x = Point::in_ball(x[0] / r, x[1] / r, x[2] / r);
    const auto q = kernels::xyz_quantities(x, xi);
    const double g = kernels::green_ball(x, xi);
    t.add({x[0], x[1], x[2], xi[0], xi[1], xi[2], q.x2, q.y2, q.z2, std::abs(q.x2 - (q.y2 - q.z2)) / q.x2, g,
           kernels::green_ball(xi, x), std::abs(g)});
    if (std::abs(g) > 1e-10) ctx.fail("ball kernel does not vanish on the sphere: " + fmt(g));
  }
}

void cmd_basis(Context& ctx) {
  auto& t = ctx.result.table;
  const auto model = build_model(ctx);
  const int d = ctx.cfg.dimension;
  t.columns = {"index", "mu", "l", "m", "n", "omega_x0"};
  for (int s = 1; s <= d; ++s) t.columns.push_back("domega_dx" + std::to_string(s) + "_x0");
  t.columns.push_back("phi0_hat");
  for (int k = 0; k < model.size(); ++k) {
    const auto& e = model.basis()[k];
    std::vector<json> row{k + 1, e.mu, e.l, e.m, e.n, model.omega_at_puncture()(k)};
    const auto g = model.basis().gradient(k, model.puncture());
    for (int s = 0; s < d; ++s) row.push_back(g[static_cast<std::size_t>(s)]);
    row.push_back(model.phi_hat()(0, k));
    t.add(row);
    if (k > 0 && model.mu()(k) > model.mu()(k - 1) + 1e-9) ctx.fail("basis not sorted by |mu|");
  }
}

void cmd_solve(Context& ctx) {
  auto& t = ctx.result.table;
  const auto model = build_model(ctx);
  const auto K = build_perturbation(ctx, model);
  const Eigen::VectorXcd f = source_coefficients(ctx, model.size());
  const auto u = solver::bk_solve(model, K, f);
  const int d = ctx.cfg.dimension;
  const Point x0 = model.puncture();
  t.columns = d == 1 ? std::vector<std::string>{"x", "u"} : std::vector<std::string>{"x1", "x2", "x3", "u"};
  const int n = ctx.cfg.grid;
  for (int i = 0; i < n; ++i) {
    const double s = (i + 0.5) / n;
    Point x = x0;
    if (d == 1) {
      x = Point::on_line(s);
    } else {
      const double reach = std::sqrt(1.0 - x0[1] * x0[1] - x0[2] * x0[2]);
      x = Point::in_ball(-reach + 2 * reach * s, x0[1], x0[2]);
    }
    if (distance(x, x0) < 1e-6) continue;
    const double v = perturbation::evaluate(model, u, x).real();
    if (d == 1)
      t.add({x[0], v});
    else
      t.add({x[0], x[1], x[2], v});
  }
  // Internal boundary conditions γ_j(u) = γ_j(K B_M u) with B_M u = f.
  const Eigen::VectorXd f_real = f.real();
  std::vector<double> targets;
  for (int j = 0; j < model.rows(); ++j) targets.push_back(u.singular(j).real());
  const auto field = solver::bm_field(model, f_real, targets);
  const auto gv = gamma::gamma_vector(field, x0);
  const Eigen::VectorXcd Kf = K.C * f;
  for (int j = 0; j < model.rows(); ++j) {
    const double res = std::abs(gv.values[static_cast<std::size_t>(j)] - Kf(j));
    t.meta.emplace_back("audit_gamma_" + std::to_string(j), fmt(res));
    if (res > ctx.cfg.tol) ctx.fail("internal condition " + std::to_string(j) + " violated by " + fmt(res));
  }
}

void cmd_determinant(Context& ctx) {
  auto& t = ctx.result.table;
  const auto model = build_model(ctx);
  const perturbation::PerturbedOperator op(model, build_perturbation(ctx, model));
  t.columns = {"lambda_re", "lambda_im", "delta_re", "delta_im", "trunc_err"};
  for (double l : linspace(ctx.cfg.lambda_min, ctx.cfg.lambda_max, ctx.cfg.lambda_count)) {
    try {
      const auto ev = op.characteristic_determinant(l);
      t.add({l, 0.0, ev.value.real(), ev.value.imag(), ev.trunc_err});
    } catch (const NumericalError& e) {
      ctx.warn("lambda=" + fmt(l) + ": " + e.what());
    }
  }
  if (std::abs(op.determinant(0.0) - 1.0) > 1e-12) ctx.fail("Delta(0) != 1");
}

}  // namespace
namespace {

// Jump-model coupling equivalent to the delta preset: the preset prescribes
// γ_0(u) = κ k u_reg(x⁰), and u(x⁰) = u_reg(x⁰)(1 + κ² k G(x⁰, x⁰)).
double mapped_coupling(double k, double kappa, double x0) {
  const double kk = kappa * kappa * k;
  return kk / (1.0 + kk * kernels::green_interval(x0, x0));
}

void cmd_spectrum(Context& ctx) {
  auto& t = ctx.result.table;
  const auto model = build_model(ctx);
  const perturbation::PerturbedOperator op(model, build_perturbation(ctx, model));
  const auto spec = spectrum::perturbed_spectrum(op, ctx.cfg.window_min, ctx.cfg.window_max);
  for (const auto& w : spec.warnings) ctx.warn(w);
  t.columns = {"kind", "lambda_re", "lambda_im", "multiplicity", "flag", "oracle_value", "abs_err", "fd_value",
               "fd_error_bar"};

  std::vector<double> oracle_values, fd_values, fd_bars;
  const bool compare = ctx.cfg.dimension == 1 && ctx.cfg.preset == "delta";
  if (compare) {
    const double x0 = ctx.cfg.puncture[0];
    const double ko = mapped_coupling(ctx.cfg.k, ctx.kappa, x0);
    if (!std::isfinite(ko)) {
      ctx.warn("coupling map singular; oracle comparison skipped");
    } else {
      oracle_values = oracle::delta_well_spectrum_1d(ko, x0, ctx.cfg.roots);
      const auto fd = oracle::fd_discretize_1d(aligned_nodes(x0, 999), ko, x0, ctx.cfg.roots);
      fd_values = fd.eigenvalues;
      fd_bars = fd.error_bar;
      t.meta.emplace_back("oracle_coupling", fmt(ko));
    }
  }

  const auto merged = spec.merged();
  for (std::size_t i = 0; i < merged.size(); ++i) {
    const auto& e = merged[i];
    const bool is_root = std::find_if(spec.roots.begin(), spec.roots.end(), [&](const auto& r) {
                           return r.lambda == e.lambda;
                         }) != spec.roots.end();
    std::vector<json> row{is_root ? "root" : "retained", e.lambda.real(), e.lambda.imag(), e.multiplicity, e.flag};
    if (i < oracle_values.size()) {
      const double err = std::abs(e.lambda.real() - oracle_values[i]);
      row.insert(row.end(), {oracle_values[i], err, fd_values[i], fd_bars[i]});
      if (err > ctx.cfg.root_tol) ctx.fail("root " + std::to_string(i + 1) + " differs from the oracle by " + fmt(err));
      if (std::abs(fd_values[i] - oracle_values[i]) > fd_bars[i])
        ctx.fail("finite-difference oracle outside its error bar at root " + std::to_string(i + 1));
    } else {
      row.insert(row.end(), {"", "", "", ""});
    }
    t.add(row);
  }
  if (compare && merged.size() < oracle_values.size()) ctx.fail("fewer eigenvalues found than the oracle reports");
}

void cmd_krein(Context& ctx) {
  auto& t = ctx.result.table;
  const auto model = build_model(ctx);
  const perturbation::PerturbedOperator op(model, build_perturbation(ctx, model));
  const auto avoid = spectral_points(op, ctx.cfg.lambda_min - 1.0, ctx.cfg.lambda_max + 1.0);
  t.columns = {"lambda", "trace_re", "trace_im", "minus_dlog_re", "minus_dlog_im", "residual"};
  double worst = 0.0;
  for (double l : avoiding_grid(ctx.cfg.lambda_min, ctx.cfg.lambda_max, ctx.cfg.lambda_count, avoid, 1e-2)) {
    const double h = 1e-6 * (1.0 + std::abs(l));
    const cplx tr = op.trace_difference(l);
    const cplx dlog = std::log(op.determinant(l + h) / op.determinant(l - h)) / (2.0 * h);
    const double res = std::abs(tr + dlog);
    worst = std::max(worst, res);
    t.add({l, tr.real(), tr.imag(), -dlog.real(), -dlog.imag(), res});
  }
  t.meta.emplace_back("max_residual", fmt(worst));
  if (worst > ctx.cfg.krein_tol) ctx.fail("Krein residual " + fmt(worst) + " exceeds " + fmt(ctx.cfg.krein_tol));
}

void cmd_trace(Context& ctx) {
  auto& t = ctx.result.table;
  const auto model = build_model(ctx);
  const perturbation::PerturbedOperator op(model, build_perturbation(ctx, model));
  const auto half_model = build_model(ctx, ctx.cfg.cutoff / 2);
  const perturbation::PerturbedOperator half(
      half_model,
      perturbation::PerturbationK{op.perturbation().dim, op.perturbation().C.leftCols(ctx.cfg.cutoff / 2), "half"});
  t.columns = {"lambda", "trace_re", "trace_im", "trunc_err"};
  const auto avoid = spectral_points(op, ctx.cfg.lambda_min - 1.0, ctx.cfg.lambda_max + 1.0);
  for (double l : avoiding_grid(ctx.cfg.lambda_min, ctx.cfg.lambda_max, ctx.cfg.lambda_count, avoid, 1e-2)) {
    try {
      const cplx tr = op.trace_difference(l);
      t.add({l, tr.real(), tr.imag(), std::abs(tr - half.trace_difference(l))});
    } catch (const NumericalError& e) {
      ctx.warn("lambda=" + fmt(l) + ": " + e.what());
    }
  }
}

void cmd_ex1(Context& ctx) {
  auto& t = ctx.result.table;
  const auto model = build_model(ctx);
  const auto K = perturbation::preset_tangential(model, ctx.cfg.seed);
  const perturbation::PerturbedOperator full(model, K);
  const perturbation::PerturbedOperator b1(model, K.restricted(1));
  t.columns = {"quantity", "lambda", "value", "expected", "abs_diff"};
  std::vector<double> poles;
  for (int n = 0; n < model.size(); ++n) poles.push_back(model.mu()(n));
  double worst_delta = 0.0, worst_trace = 0.0;
  for (double l : avoiding_grid(ctx.cfg.lambda_min, ctx.cfg.lambda_max, 50, poles, 1e-2)) {
    const double dd = std::abs(full.delta01(l) - 1.0);
    const double tr = std::abs(b1.trace_difference(l));
    worst_delta = std::max(worst_delta, dd);
    worst_trace = std::max(worst_trace, tr);
    t.add({"delta01", l, full.delta01(l).real(), 1.0, dd});
    t.add({"trace_B1", l, tr, 0.0, tr});
  }
  if (worst_delta > 1e-12) ctx.fail("Delta_01 deviates from 1 by " + fmt(worst_delta));
  if (worst_trace > 1e-10) ctx.fail("trace of B_1 deviates from 0 by " + fmt(worst_trace));

  const auto spec = spectrum::perturbed_spectrum(b1, ctx.cfg.window_min, ctx.cfg.window_max);
  std::map<double, int> expected;
  for (int n = 0; n < model.size(); ++n) {
    const double m = model.mu()(n);
    if (m <= ctx.cfg.window_min || m >= ctx.cfg.window_max) continue;
    auto it = std::find_if(expected.begin(), expected.end(),
                           [&](const auto& p) { return std::abs(p.first - m) <= 1e-9 * std::abs(m); });
    if (it == expected.end())
      expected[m] = 1;
    else
      ++it->second;
  }
  const auto merged = spec.merged();
  if (merged.size() != expected.size()) ctx.fail("spectrum of B_1 differs in size from the unperturbed spectrum");
  auto it = expected.rbegin();
  for (std::size_t i = 0; i < merged.size() && it != expected.rend(); ++i, ++it) {
    const double diff = std::abs(merged[i].lambda - cplx(it->first, 0.0));
    t.add({"eigenvalue_B1", it->first, merged[i].lambda.real(), it->first, diff});
    if (diff > 1e-12 * std::abs(it->first) || merged[i].multiplicity != it->second)
      ctx.fail("eigenvalue " + fmt(it->first) + " of B_0 not reproduced");
  }
}

void cmd_thm52(Context& ctx) {
  auto& t = ctx.result.table;
  t.columns = {"scenario", "N", "mu_N", "branch", "nearest_eigenvalue", "deviation", "eigvec_coefficient", "holds"};
  const int N = ctx.cfg.theorem_index;
  const auto model = build_model(ctx);
  const auto record = [&](const std::string& name, const spectrum::Theorem52Report& r) {
    t.add({name, r.N, r.mu_N, r.branch, r.nearest, r.deviation, r.eigvec_coefficient, r.holds});
    if (!r.holds) ctx.fail(name + ": eigenvalue-shift scenario failed (deviation " + fmt(r.deviation) + ")");
  };
  record("configured", spectrum::theorem52_check(model, build_perturbation(ctx, model), N));

  std::mt19937_64 rng(ctx.cfg.seed);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  auto random_row0 = [&](const perturbation::SpectralModel& m) {
    auto K = perturbation::zero_perturbation(m);
    for (int n = 0; n < m.size(); ++n) K.C(0, n) = u(rng) * ctx.cfg.k / std::abs(m.mu()(n));
    return K;
  };
  auto forced = random_row0(model);
  forced.C(0, N - 1) = 0.0;
  record("C0N forced to 0", spectrum::theorem52_check(model, forced, N));

  Point x0 = model.puncture();
  if (std::abs(model.omega_at_puncture()(N - 1)) <= 1e-12)
    x0 = ctx.cfg.dimension == 1 ? Point::on_line(0.3) : Point::in_ball(0.1, 0.2, 0.3);
  const perturbation::SpectralModel generic_model(basis::SpectralBasis(ctx.cfg.dimension, ctx.cfg.cutoff), x0,
                                                  ctx.kappa);
  record("generic", spectrum::theorem52_check(generic_model,
                                              perturbation::preset_delta_coupling(ctx.cfg.k, generic_model), N));
}

void cmd_oracle(Context& ctx) {
  auto& t = ctx.result.table;
  t.columns = {"quantity", "main_value", "oracle_value", "abs_err", "rel_err", "method"};
  const auto add = [&](const oracle::OracleReport& r) {
    t.add({r.quantity, r.main_value, r.oracle_value, r.abs_err, r.rel_err, r.method});
  };
  const auto verdict = oracle::kappa_verdict();
  for (std::size_t i = 0; i < verdict.ratios.size(); ++i)
    add(oracle::make_report("kappa_ratio[" + std::to_string(i) + "] order=" + std::to_string(verdict.orders[i]),
                            verdict.ratios[i], verdict.kappa, "composite Gauss of G*omega_n with exclusion extrapolation"));
  if (!verdict.consistent) ctx.fail("kappa verdict inconsistent");

  const double x0 = ctx.cfg.dimension == 1 ? ctx.cfg.puncture[0] : 0.3;
  const int count = std::max(ctx.cfg.roots, 1);
  for (double k : {0.5, 1.0, 5.0}) {
    const auto exact = oracle::delta_well_spectrum_1d(k, x0, count);
    const auto fd = oracle::fd_discretize_1d(aligned_nodes(x0, 999), k, x0, count);
    for (std::size_t i = 0; i < std::min(exact.size(), fd.eigenvalues.size()); ++i) {
      const auto r = oracle::make_report("lambda_" + std::to_string(i + 1) + " k=" + fmt(k) + " x0=" + fmt(x0),
                                         fd.eigenvalues[i], exact[i], "finite differences h,h/2 Richardson vs matching condition");
      add(r);
      if (r.abs_err > fd.error_bar[i]) ctx.fail(r.quantity + ": oracles disagree beyond the error bar");
    }
  }
}

using Handler = void (*)(Context&);

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> h{
      {"gamma-check", cmd_gamma_check}, {"green-eval", cmd_green_eval}, {"basis", cmd_basis},
      {"solve", cmd_solve},             {"determinant", cmd_determinant}, {"spectrum", cmd_spectrum},
      {"krein", cmd_krein},             {"trace", cmd_trace},             {"ex1", cmd_ex1},
      {"thm52", cmd_thm52},             {"oracle", cmd_oracle}};
  return h;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : handlers()) n.push_back(name);
    return n;
  }();
  return names;
}

CommandResult run_command(const std::string& name, const config::ExperimentConfig& cfg) {
  const auto& h = handlers();
  const auto it = std::find_if(h.begin(), h.end(), [&](const auto& p) { return p.first == name; });
  if (it == h.end()) throw NumericalError(ErrorKind::InvalidArgument, "unknown command '" + name + "'");
  Context ctx{cfg};
  ctx.kappa = resolve_kappa(ctx);
  add_meta(ctx, name);
  it->second(ctx);
  return std::move(ctx.result);
}

}  // namespace pdelta::commands
