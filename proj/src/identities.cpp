#include "dp/identities.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dp/diagnostics.hpp"
#include "dp/helmholtz.hpp"

namespace dp {

IdentityReport IdentityReport::make(std::string name, double lhs, double rhs, double tolerance,
                                    std::string note) {
  IdentityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = std::abs(lhs - rhs);
  double denom = std::max(std::abs(lhs), std::abs(rhs));
  r.rel_residual = denom > 0.0 ? r.residual / denom : 0.0;
  r.tolerance = tolerance;
  r.pass = (denom >= 1e-9) ? (r.rel_residual <= tolerance) : (r.residual <= tolerance);
  r.note = std::move(note);
  return r;
}

std::string identity_csv_header() {
  return "name,lhs,rhs,residual,rel_residual,tolerance,pass";
}

std::string to_csv(const IdentityReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.name << ',' << r.lhs << ',' << r.rhs << ',' << r.residual << ',' << r.rel_residual
     << ',' << r.tolerance << ',' << (r.pass ? 1 : 0);
  return os.str();
}

namespace {

Field branch_profile(const Field& u, double xi, double a_v, double a_vxx, double a_vx_left) {
  SmoothVariable sv = smooth_variable(u);
  const auto& g = *u.grid;
  Eigen::Index split = g.nearest_index(xi);
  Field out(u.grid);
  for (Eigen::Index j = 0; j < g.n(); ++j) {
    double sgn = (j <= split) ? 1.0 : -1.0;
    out.values[j] =
        a_v * sv.v.values[j] + a_vxx * sv.vxx.values[j] + sgn * a_vx_left * sv.vx.values[j];
  }
  return out;
}

}  // namespace

Field g_profile(const Field& u, double xi) { return branch_profile(u, xi, 2.0, 1.0, -3.0); }

Field h_profile(const Field& u, double xi) { return branch_profile(u, xi, 16.0, -1.0, -6.0); }

IdentityReport quadratic_identity(const Field& u, double c, double tolerance) {
  Field v = invert_helmholtz(u, 4.0);
  ArgmaxResult am = argmax_refined(v, 0.0, -1.0, ExtremumKind::Max);
  Spectrum s = analyze(u);
  SmoothVariable sv = smooth_variable(s);
  double e_u = quadrature(energy_density(sv));
  double lhs = e_u - peakon_energy(c);
  double vxi = Interpolant(v)(am.x);
  double rhs = peakon_h_dist_sq(s, c, am.x) + 4.0 * c * (vxi - c / 6.0);
  std::ostringstream note;
  note << "xi=" << am.x;
  return IdentityReport::make("quadratic", lhs, rhs, tolerance, note.str());
}

TrainQuadraticReport train_quadratic_identity(const Field& u, const TrainSpec& spec,
                                              const std::vector<double>& xi,
                                              double tolerance_constant) {
  spec.validate();
  if (xi.size() != spec.size())
    throw std::invalid_argument("train_quadratic_identity: xi size mismatch");
  const double L = spec.separation;
  for (std::size_t j = 1; j < xi.size(); ++j)
    if (xi[j] - xi[j - 1] < 0.5 * L)
      throw std::invalid_argument("train_quadratic_identity: xi gaps below L/2");
  Spectrum s = analyze(u);
  SmoothVariable sv = smooth_variable(s);
  Interpolant vint(sv.v);
  double e_u = quadrature(energy_density(sv));
  double sum_e = 0.0, corr = 0.0;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    double c = spec.velocities[j];
    sum_e += peakon_energy(c);
    corr += 4.0 * c * (vint(xi[j]) - c / 6.0);
  }
  double lhs = e_u - sum_e;
  double rhs = train_h_dist_sq(s, spec.velocities, xi) + corr;
  double envelope = tolerance_constant * std::exp(-0.5 * L);
  TrainQuadraticReport out;
  IdentityReport r = IdentityReport::make("train_quadratic", lhs, rhs, 0.0);
  r.tolerance = envelope;  // absolute envelope C e^{-L/2}
  r.pass = r.residual <= envelope + 1e-10 * std::max(std::abs(lhs), 1.0);
  std::ostringstream note;
  note << "envelope=" << envelope;
  r.note = note.str();
  out.report = r;
  out.cross_term_bound = spec.norm1() * std::exp(-2.0 * L / 3.0);
  return out;
}

GSquareCheck g_square_check(const Field& u, double xi) {
  GSquareCheck out;
  Field g = g_profile(u, xi);
  Field gsq(g.grid);
  gsq.values = g.values.square();
  out.integral = quadrature(gsq);
  SmoothVariable sv = smooth_variable(u);
  double e_u = quadrature(energy_density(sv));
  double vxi = Interpolant(sv.v)(xi);
  double vxxi = Interpolant(sv.vx)(xi);
  out.vx_at_xi = vxxi;
  out.at_critical_value = e_u - 12.0 * vxi * vxi;
  out.identity_value = out.at_critical_value - 6.0 * vxxi * vxxi;
  return out;
}

IdentityReport improvement_identity(const Field& u, double c, double tolerance) {
  Field v = invert_helmholtz(u, 4.0);
  ArgmaxResult am = argmax_refined(v, 0.0, -1.0, ExtremumKind::Max);
  GSquareCheck gc = g_square_check(u, am.x);
  double M = Interpolant(v)(am.x);
  double rhs = peakon_h_dist_sq(analyze(u), c, am.x) - 12.0 * (c / 6.0 - M) * (c / 6.0 - M);
  return IdentityReport::make("improvement", gc.integral, rhs, tolerance);
}

CubicBoundReport cubic_bound(const Field& u, double c, double alpha2,
                             const CubicBoundParams& params) {
  if (!(alpha2 > 0.0)) throw std::invalid_argument("cubic_bound: alpha2 must be positive");
  CubicBoundReport out;
  out.eps = std::sqrt(alpha2);
  Field v = invert_helmholtz(u, 4.0);
  ArgmaxResult am = argmax_refined(v, 0.0, -1.0, ExtremumKind::Max);
  out.M = Interpolant(v)(am.x);
  Spectrum s = analyze(u);
  double h_dist = std::sqrt(std::max(0.0, peakon_h_dist_sq(s, c, am.x)));
  double linf = peakon_linf_dist(u, c, am.x);
  // u - 6v on Theta_xi = [xi - 6.7, xi + 6.7]
  double u6v = -std::numeric_limits<double>::infinity();
  const auto& g = *u.grid;
  for (Eigen::Index j = 0; j < g.n(); ++j)
    if (std::abs(g.min_image(g.node(j), am.x)) <= 6.7)
      u6v = std::max(u6v, u.values[j] - 6.0 * v.values[j]);
  out.hypothesis_ok = (h_dist <= params.h_dist_factor * (2.0 + c) * out.eps) &&
                      (linf <= params.linf_cap_factor * c) && (u6v <= alpha2);

  ConservedTriple cons = conserved(u);
  double M = out.M;
  double p_m = M * M * M - 0.25 * cons.E * M + cons.F / 72.0;
  double bnd = (2.0 + c) * (2.0 + c) * alpha2 * alpha2 / 8.0;
  IdentityReport b;
  b.name = "cubic_bound";
  b.lhs = p_m;
  b.rhs = bnd;
  b.residual = std::max(0.0, p_m - bnd);
  b.rel_residual = bnd > 0.0 ? b.residual / bnd : 0.0;
  b.tolerance = 0.0;
  b.pass = p_m <= bnd;
  if (!out.hypothesis_ok) b.note = "hypothesis check failed";
  out.bound = b;

  double f_l = M * M * M - 0.25 * peakon_energy(c) * M + peakon_cubic(c) / 72.0;
  double f_r = (c / 6.0 - M) * (c / 6.0 - M) * (M + c / 3.0);
  out.factorization = IdentityReport::make("cubic_factorization", f_l, f_r, 1e-12);
  return out;
}

std::vector<LocalizedIdentityReport> localized_identity_suite(const Field& u,
                                                              const TrainSpec& spec,
                                                              const WeightSpec& weights,
                                                              const std::vector<double>& xi,
                                                              double envelope_constant) {
  spec.validate();
  weights.validate();
  const int npos = spec.n_positive();
  if (static_cast<int>(weights.windows()) != npos)
    throw std::invalid_argument("localized_identity_suite: window/bump count mismatch");
  if (xi.size() != spec.size())
    throw std::invalid_argument("localized_identity_suite: xi size mismatch");
  const double L = spec.separation;
  const double uh2 = h_norm_sq(analyze(u));
  const double uh = std::sqrt(uh2);
  const double env_g = envelope_constant * uh2 / std::sqrt(L);
  const double env_hg = envelope_constant * uh2 * uh / std::sqrt(L);
  const int nneg = spec.n_negative();
  SmoothVariable sv = smooth_variable(u);
  Interpolant vint(sv.v);
  const auto& g = *u.grid;

  std::vector<LocalizedIdentityReport> out;
  for (int i = 0; i < npos; ++i) {
    const double xi_i = xi[static_cast<std::size_t>(nneg + i)];
    Field gi = g_profile(u, xi_i);
    Field hi = h_profile(u, xi_i);
    const double Mi = vint(xi_i);
    LocalizedPair loc = localized_pair(u, weights, static_cast<std::size_t>(i));
    double phi_at_xi = weights.window(static_cast<std::size_t>(i), xi_i);
    double g_int = 0.0, hg_int = 0.0;
    for (Eigen::Index jn = 0; jn < g.n(); ++jn) {
      double w = weights.window(static_cast<std::size_t>(i), g.node(jn));
      double g2 = gi.values[jn] * gi.values[jn];
      g_int += g2 * w;
      hg_int += hi.values[jn] * g2 * w;
    }
    g_int *= g.spacing();
    hg_int *= g.spacing();

    LocalizedIdentityReport rep;
    rep.window = i + 1;
    double g_rhs = loc.E - 12.0 * Mi * Mi * phi_at_xi;
    rep.g_window = IdentityReport::make("g_window_" + std::to_string(i + 1), g_int, g_rhs, 0.0);
    rep.g_window.tolerance = env_g;
    rep.g_window.pass = rep.g_window.residual <= env_g;
    double hg_rhs = loc.F - 144.0 * Mi * Mi * Mi * phi_at_xi;
    rep.hg_window =
        IdentityReport::make("hg_window_" + std::to_string(i + 1), hg_int, hg_rhs, 0.0);
    rep.hg_window.tolerance = env_hg;
    rep.hg_window.pass = rep.hg_window.residual <= env_hg;
    rep.g_constant = rep.g_window.residual * std::sqrt(L) / std::max(uh2, 1e-300);
    rep.hg_constant = rep.hg_window.residual * std::sqrt(L) / std::max(uh2 * uh, 1e-300);
    rep.cubic_margin = 18.0 * Mi * loc.E - 72.0 * Mi * Mi * Mi - loc.F;
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace dp
