#include "dp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dp/helmholtz.hpp"

namespace dp {

namespace {

// golden-section minimizer on [a, b]
template <typename F>
double golden_min(F&& f, double a, double b, double tol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

ArgmaxResult argmax_refined(const Field& v, double lo, double hi, ExtremumKind kind,
                            bool polish) {
  const auto& g = *v.grid;
  const double sgn = (kind == ExtremumKind::Max) ? 1.0 : -1.0;
  const bool whole = !(lo < hi);
  Eigen::Index best = -1;
  double best_val = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < g.n(); ++j) {
    double x = g.node(j);
    if (!whole && (x < lo || x > hi)) continue;
    double val = sgn * v.values[j];
    if (val > best_val) {
      best_val = val;
      best = j;
    }
  }
  if (best < 0) throw std::invalid_argument("argmax_refined: empty window");

  ArgmaxResult out;
  const Eigen::Index n = g.n();
  auto wrap = [n](Eigen::Index j) { return ((j % n) + n) % n; };
  double ym = sgn * v.values[wrap(best - 1)];
  double y0 = best_val;
  double yp = sgn * v.values[wrap(best + 1)];
  double denom = ym - 2.0 * y0 + yp;
  if (std::abs(denom) < 1e-307 * std::max(1.0, std::abs(y0))) {
    out.degenerate = true;
    out.x = whole ? g.node(0) : 0.5 * (lo + hi);
    out.value = v.values[best];
    return out;
  }
  double dx = 0.5 * (ym - yp) / denom * g.spacing();
  double x = g.node(best) + dx;

  if (polish) {
    Interpolant interp(v);
    for (int it = 0; it < 4; ++it) {
      double d1 = interp.eval(x, 1);
      double d2 = interp.eval(x, 2);
      if (sgn * d2 >= 0.0 || !std::isfinite(d1) || !std::isfinite(d2)) break;
      double stepx = d1 / d2;
      if (std::abs(stepx) > g.spacing()) break;
      x -= stepx;
    }
    out.value = interp(x);
  } else {
    out.value = v.values[best];
  }
  if (!whole) x = std::clamp(x, lo, hi);
  out.x = x;
  return out;
}

OrbitalDistance orbital_distance(const Field& u, double c) {
  u.require_finite("orbital_distance");
  Spectrum s = analyze(u);
  const auto& g = *u.grid;
  const double len = g.length();
  const auto half = static_cast<std::size_t>(g.n() / 2);

  // ||u - phi(.-r)||^2 = E(u) + E(phi) - 2 cross(r) with
  // cross(r) = sum_m count_m w_m L Re(c_m(u) p0_m e^{i k r}), p0_m real.
  // A field synthesized from line coefficients d_m = w_m L p0_m c_m(u)
  // evaluates exactly to cross at every node: one inverse transform scans
  // every candidate shift.
  Spectrum crosskernel = s;
  for (std::size_t m = 0; m <= half; ++m) {
    double k = s.wavenumber(m);
    double w = (1.0 + k * k) / (4.0 + k * k);
    double p0 = (2.0 * c / len) / (1.0 + k * k);
    crosskernel.set_line_coef(m, s.line_coef(m) * (w * p0 * len));
  }
  crosskernel.bins.back() = cplx(crosskernel.bins.back().real(), 0.0);
  Field crossfield = synthesize(crosskernel);
  Eigen::Index best = 0;
  double best_cross = crossfield.values[0];
  for (Eigen::Index j = 1; j < g.n(); ++j)
    if (crossfield.values[j] > best_cross) {
      best_cross = crossfield.values[j];
      best = j;
    }
  double r0 = g.node(best);
  auto dist_sq_at = [&](double r) { return train_h_dist_sq(s, {c}, {r}); };
  double r = golden_min([&](double rr) { return dist_sq_at(rr); }, r0 - g.spacing(),
                        r0 + g.spacing(), 1e-10 * std::max(1.0, len));

  OrbitalDistance out;
  out.shift = r;
  out.distance = std::sqrt(std::max(0.0, dist_sq_at(r)));
  Field v = invert_helmholtz(u, 4.0);
  ArgmaxResult am = argmax_refined(v, 0.0, -1.0, ExtremumKind::Max);
  out.xi = am.x;
  out.distance_at_xi = std::sqrt(std::max(0.0, dist_sq_at(am.x)));
  return out;
}

MassSplit y_mass_split(const Field& y, std::optional<double> window_left) {
  y.require_finite("y_mass_split");
  const auto& g = *y.grid;
  MassSplit out;
  for (Eigen::Index j = 0; j < g.n(); ++j) {
    if (window_left && g.node(j) < *window_left) continue;
    double v = y.values[j];
    if (v > 0.0) out.pos += v;
    else out.neg -= v;
  }
  out.pos *= g.spacing();
  out.neg *= g.spacing();
  out.total_l1 = out.pos + out.neg;
  return out;
}

double orthogonality_residual(const Field& v, double xi, double c) {
  const auto& g = *v.grid;
  double acc = 0.0;
  for (Eigen::Index j = 0; j < g.n(); ++j) {
    double d = g.min_image(g.node(j), xi);
    double sgn = (d > 0.0) ? 1.0 : ((d < 0.0) ? -1.0 : 0.0);
    double ad = std::abs(d);
    double rho_prime = sgn * (-(c / 3.0) * std::exp(-ad) + (c / 3.0) * std::exp(-2.0 * ad));
    acc += v.values[j] * rho_prime;
  }
  return g.spacing() * acc;
}

ModulationTrack train_track(const History& history, const TrainSpec& spec) {
  spec.validate();
  if (history.empty()) throw std::invalid_argument("train_track: empty history");
  const double L = spec.separation;
  const double window_half = L / 4.0;
  ModulationTrack track;
  const int nneg = spec.n_negative();
  for (std::size_t j = 0; j < spec.size(); ++j) {
    int idx = static_cast<int>(j) - nneg;
    if (idx >= 0) ++idx;  // skip 0
    track.indices.push_back(idx);
    track.kinds.push_back(spec.velocities[j] < 0.0 ? ExtremumKind::Min : ExtremumKind::Max);
    Trajectory traj;
    traj.label = "modulation(" + std::to_string(idx) + ")";
    track.xi.push_back(std::move(traj));
  }
  std::vector<double> centers = spec.shifts;
  const double sigma8 = spec.sigma() / 8.0;

  for (const auto& snap : history) {
    Field v = invert_helmholtz(snap.u, 4.0);
    std::vector<double> located(spec.size());
    for (std::size_t j = 0; j < spec.size(); ++j) {
      ArgmaxResult am =
          argmax_refined(v, centers[j] - window_half, centers[j] + window_half, track.kinds[j]);
      located[j] = am.x;
    }
    for (std::size_t j = 1; j < spec.size(); ++j) {
      if (!(located[j] > located[j - 1])) {
        track.ordering_ok = false;
        if (track.collision_time < 0.0) track.collision_time = snap.t;
      }
      if (located[j] - located[j - 1] < 2.0 * window_half && track.collision_time < 0.0)
        track.collision_time = snap.t;
    }
    if (track.collision_time >= 0.0) break;
    for (std::size_t j = 0; j < spec.size(); ++j) {
      track.xi[j].times.push_back(snap.t);
      track.xi[j].positions.push_back(located[j]);
      centers[j] = located[j];
    }
  }

  for (std::size_t j = 0; j < spec.size(); ++j) {
    const auto& traj = track.xi[j];
    if (traj.times.size() >= 2) {
      track.mean_speeds.push_back(fit_slope(traj.times, traj.positions));
      for (std::size_t i = 1; i < traj.times.size(); ++i) {
        double sp = (traj.positions[i] - traj.positions[i - 1]) /
                    (traj.times[i] - traj.times[i - 1]);
        if (std::abs(sp - spec.velocities[j]) > sigma8) track.speed_band_ok = false;
      }
    } else {
      track.mean_speeds.push_back(0.0);
    }
  }
  return track;
}

std::vector<DecayWindowReport> decay_window_series(const History& history,
                                                   const Trajectory& xi, double c) {
  if (history.size() != xi.times.size())
    throw std::invalid_argument("decay_window_series: history/trajectory mismatch");
  std::vector<DecayWindowReport> out;
  double y0_l1 = 0.0;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const auto& snap = history[i];
    DerivedFields df = derived_fields(snap.u);
    if (i == 0) y0_l1 = y_mass_split(df.y).total_l1;
    DecayWindowReport rep;
    rep.t = snap.t;
    rep.window_left = xi.positions[i] - c * snap.t / 16.0;
    rep.mass = y_mass_split(df.y, rep.window_left).neg;
    rep.bound = std::exp(-c * snap.t / 8.0) * y0_l1;
    double best = -std::numeric_limits<double>::infinity();
    const auto& g = *snap.u.grid;
    for (Eigen::Index j = 0; j < g.n(); ++j)
      if (g.node(j) > xi.positions[i] - 8.0)
        best = std::max(best, snap.u.values[j] - 6.0 * df.v.values[j]);
    rep.u_minus_6v_max = best;
    out.push_back(rep);
  }
  return out;
}

MonotonicitySeries monotonicity_series(const History& history, const TrainSpec& spec,
                                       const ModulationTrack& track, double K) {
  if (history.empty()) throw std::invalid_argument("monotonicity_series: empty history");
  const int nneg = spec.n_negative();
  const int npos = spec.n_positive();
  if (npos < 1) throw std::invalid_argument("monotonicity_series: no positive bumps");
  const double L = spec.separation;
  const double c1 = spec.velocities[static_cast<std::size_t>(nneg)];
  const double x1_0 = track.xi[static_cast<std::size_t>(nneg)].positions.front();

  MonotonicitySeries out;
  out.lambdas = {0.0, 1.0 / (2.0 * c1)};
  out.j_series.assign(static_cast<std::size_t>(npos) * out.lambdas.size(), {});

  for (std::size_t s = 0; s < history.size(); ++s) {
    const auto& snap = history[s];
    out.times.push_back(snap.t);
    std::vector<double> centers(static_cast<std::size_t>(npos));
    centers[0] = x1_0 + 0.5 * c1 * snap.t - L / 4.0;
    for (int j = 2; j <= npos; ++j) {
      double a = track.xi[static_cast<std::size_t>(nneg + j - 2)].positions[s];
      double b = track.xi[static_cast<std::size_t>(nneg + j - 1)].positions[s];
      centers[static_cast<std::size_t>(j - 1)] = 0.5 * (a + b);
    }
    for (std::size_t lj = 0; lj < out.lambdas.size(); ++lj) {
      WeightSpec ws{K, centers, out.lambdas[lj]};
      for (int j = 0; j < npos; ++j) {
        double val = j_functional(snap.u, ws, static_cast<std::size_t>(j));
        out.j_series[static_cast<std::size_t>(j) * out.lambdas.size() + lj].push_back(val);
      }
    }
    // E + (c1/2^9) M variant with the plain Psi / Phi weights at y_1
    DerivedFields df = derived_fields(snap.u);
    SmoothVariable sv = smooth_variable(snap.u);
    Field edens = energy_density(sv);
    const auto& g = *snap.u.grid;
    double acc = 0.0;
    const double gamma = c1 / 512.0;
    for (Eigen::Index i = 0; i < g.n(); ++i) {
      double z = g.node(i) - centers[0];
      acc += edens.values[i] * psi(z) + gamma * df.y.values[i] * phi_ramp(z);
    }
    out.e_gamma_m_series.push_back(g.spacing() * acc);
  }

  for (auto& series : out.j_series) {
    double inc = 0.0;
    for (double v : series) inc = std::max(inc, v - series.front());
    out.max_forward_increment.push_back(inc);
  }
  double einc = 0.0;
  for (double v : out.e_gamma_m_series) einc = std::max(einc, v - out.e_gamma_m_series.front());
  out.e_gamma_m_increment = einc;
  return out;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_slope: bad input");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

}  // namespace dp
