#include "dp/solver.hpp"

#include <cmath>

#include "dp/fft.hpp"

namespace dp {

namespace {

/// Dealiased square of a spectrum; optionally reports max|u| sampled on the
/// padded grid (an upper proxy for the CFL amplitude).
Spectrum square_spec(const Spectrum& s, double* max_abs) {
  const auto n = static_cast<std::size_t>(s.n());
  const std::size_t half = n / 2;
  const std::size_t n2 = 2 * n;
  std::vector<cplx> pad(n2 / 2 + 1, cplx(0.0, 0.0));
  for (std::size_t m = 0; m < half; ++m) pad[m] = 2.0 * s.bins[m];
  pad[half] = s.bins[half];
  std::vector<double> phys(n2);
  const auto& plan2 = fft::real_plan(n2);
  plan2.inverse(pad.data(), phys.data());
  if (max_abs) {
    double ma = 0.0;
    for (double v : phys) ma = std::max(ma, std::abs(v));
    *max_abs = ma;
  }
  for (auto& v : phys) v *= v;
  std::vector<cplx> prod(n2 / 2 + 1);
  plan2.forward(phys.data(), prod.data());
  Spectrum out;
  out.grid = s.grid;
  out.bins.assign(half + 1, cplx(0.0, 0.0));
  for (std::size_t m = 0; m <= half; ++m) out.bins[m] = 0.5 * prod[m];
  out.bins[half] = cplx(out.bins[half].real(), 0.0);
  return out;
}

/// F(u) = -d/dx [ (1/2) u^2 + (3/2)(1-dxx)^{-1} u^2 ].
Spectrum rhs_spec(const Spectrum& s, double* max_abs = nullptr) {
  Spectrum sq = square_spec(s, max_abs);
  const std::size_t half = sq.bins.size() - 1;
  for (std::size_t m = 0; m <= half; ++m) {
    double k = sq.wavenumber(m);
    cplx ik(0.0, -k);
    sq.bins[m] *= ik * (0.5 + 1.5 / (1.0 + k * k));
  }
  sq.bins[half] = cplx(0.0, 0.0);
  return sq;
}

void axpy(Spectrum& y, double a, const Spectrum& x) {
  for (std::size_t m = 0; m < y.bins.size(); ++m) y.bins[m] += a * x.bins[m];
}

/// One RK4 update of uhat by dt; k1 (and the stage amplitude) are reused
/// from the caller's CFL probe.
void rk4_update(Spectrum& uhat, const Spectrum& k1, double dt) {
  Spectrum stage = uhat;
  axpy(stage, 0.5 * dt, k1);
  Spectrum k2 = rhs_spec(stage);
  stage = uhat;
  axpy(stage, 0.5 * dt, k2);
  Spectrum k3 = rhs_spec(stage);
  stage = uhat;
  axpy(stage, dt, k3);
  Spectrum k4 = rhs_spec(stage);
  axpy(uhat, dt / 6.0, k1);
  axpy(uhat, dt / 3.0, k2);
  axpy(uhat, dt / 3.0, k3);
  axpy(uhat, dt / 6.0, k4);
}

double rk4_point(const Field& u0, const Field& u1, double x, double dt) {
  // characteristic step through the linear-in-time field: classical RK4
  auto vel = [&](double theta, double pos) {
    double a = cubic_interp(u0, pos);
    double b = cubic_interp(u1, pos);
    return (1.0 - theta) * a + theta * b;
  };
  double k1 = vel(0.0, x);
  double k2 = vel(0.5, x + 0.5 * dt * k1);
  double k3 = vel(0.5, x + 0.5 * dt * k2);
  double k4 = vel(1.0, x + dt * k3);
  return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Field rhs(const Field& u) {
  u.require_finite("rhs");
  return synthesize(rhs_spec(analyze(u)));
}

SimState step(const SimState& state, const SolverConfig& cfg) {
  if (state.dt < 0.0) throw std::invalid_argument("step: negative dt");
  if (state.dt == 0.0) return state;
  Spectrum uhat = analyze(state.u);
  double maxu = 0.0;
  Spectrum k1 = rhs_spec(uhat, &maxu);
  if (!std::isfinite(maxu) || maxu > cfg.blowup_max)
    throw BlowupError(state.t, state.step_count, maxu);
  rk4_update(uhat, k1, state.dt);
  if (cfg.filter_on) apply_filter(uhat, cfg.filter_strength);
  SimState out;
  out.t = state.t + state.dt;
  out.u = synthesize(uhat);
  out.dt = state.dt;
  out.step_count = state.step_count + 1;
  return out;
}

EvolveResult evolve(const SimState& initial, double T, const SolverConfig& cfg, int out_every,
                    const std::vector<double>& track_points,
                    const std::function<void(const SimState&)>& observer) {
  if (T < initial.t) throw std::invalid_argument("evolve: T before current time");
  if (out_every < 1) throw std::invalid_argument("evolve: out_every must be >= 1");
  EvolveResult result;
  const double h = initial.u.grid->spacing();

  Spectrum uhat = analyze(initial.u);
  SimState cur = initial;
  FlowTracker tracker;
  tracker.positions = track_points;
  for (double x : track_points) {
    Trajectory traj;
    traj.label = "flow(" + std::to_string(x) + ")";
    traj.times.push_back(cur.t);
    traj.positions.push_back(x);
    tracker.trajectories.push_back(std::move(traj));
  }

  auto emit_sample = [&](const SimState& st) {
    result.samples.push_back({st.t, st.u});
    if (observer) observer(st);
  };
  emit_sample(cur);

  Field u_prev = cur.u;
  long steps_since_sample = 0;
  while (cur.t < T - 1e-14 * std::max(1.0, T)) {
    double maxu = 0.0;
    Spectrum k1 = rhs_spec(uhat, &maxu);
    if (!std::isfinite(maxu) || maxu > cfg.blowup_max)
      throw BlowupError(cur.t, cur.step_count, maxu);
    double dt = cfg.cfl * h / std::max(1.0, maxu);
    dt = std::min(dt, T - cur.t);
    rk4_update(uhat, k1, dt);
    if (cfg.filter_on) apply_filter(uhat, cfg.filter_strength);
    cur.t += dt;
    cur.dt = dt;
    ++cur.step_count;
    ++steps_since_sample;

    const bool need_field = !track_points.empty() || steps_since_sample >= out_every ||
                            !(cur.t < T - 1e-14 * std::max(1.0, T));
    if (need_field) {
      Field u_next = synthesize(uhat);
      if (!track_points.empty()) {
        for (std::size_t p = 0; p < tracker.positions.size(); ++p) {
          tracker.positions[p] = rk4_point(u_prev, u_next, tracker.positions[p], dt);
          tracker.trajectories[p].times.push_back(cur.t);
          tracker.trajectories[p].positions.push_back(tracker.positions[p]);
        }
        u_prev = u_next;
      }
      cur.u = u_next;
      if (steps_since_sample >= out_every || !(cur.t < T - 1e-14 * std::max(1.0, T))) {
        emit_sample(cur);
        steps_since_sample = 0;
      }
    }
  }
  result.final_state = cur;
  result.tracked = std::move(tracker.trajectories);
  return result;
}

Trajectory flow_map(const History& history, double x_init) {
  if (history.size() < 2) throw std::invalid_argument("flow_map: need at least two snapshots");
  Trajectory traj;
  traj.label = "flow(" + std::to_string(x_init) + ")";
  double x = x_init;
  traj.times.push_back(history.front().t);
  traj.positions.push_back(x);
  for (std::size_t i = 0; i + 1 < history.size(); ++i) {
    double dt = history[i + 1].t - history[i].t;
    Interpolant a(history[i].u);
    Interpolant b(history[i + 1].u);
    auto vel = [&](double theta, double pos) {
      return (1.0 - theta) * a(pos) + theta * b(pos);
    };
    double k1 = vel(0.0, x);
    double k2 = vel(0.5, x + 0.5 * dt * k1);
    double k3 = vel(0.5, x + 0.5 * dt * k2);
    double k4 = vel(1.0, x + dt * k3);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    traj.times.push_back(history[i + 1].t);
    traj.positions.push_back(x);
  }
  return traj;
}

SmoothVariableCheck smooth_variable_rhs_check(const Sample& before, const Sample& mid,
                                              const Sample& after) {
  double span = after.t - before.t;
  if (!(span > 0.0)) throw std::invalid_argument("smooth_variable_rhs_check: bad bracket");
  Field v0 = invert_helmholtz(before.u, 4.0);
  Field v1 = invert_helmholtz(after.u, 4.0);
  Field dvdt(mid.u.grid);
  dvdt.values = (v1.values - v0.values) / span;
  DerivedFields df = derived_fields(mid.u);
  Field hx = differentiate(df.h, 1);

  auto l2 = [](const Eigen::ArrayXd& a) { return std::sqrt(a.square().sum()); };
  double r_half = l2(dvdt.values + 0.5 * hx.values) / std::max(l2(0.5 * hx.values), 1e-300);
  double r_full = l2(dvdt.values + hx.values) / std::max(l2(hx.values), 1e-300);

  SmoothVariableCheck out;
  out.residual_half = r_half;
  out.residual_full = r_full;
  out.report.name = "smooth_variable_rate";
  out.report.lhs = r_half;
  out.report.rhs = r_full;
  out.report.residual = r_half;
  out.report.rel_residual = r_half;
  out.report.tolerance = 0.05;
  out.report.pass = (r_half < 0.05) && (r_full > 0.4);
  out.report.note = "matching form is -h_x/2";
  return out;
}

IdentityReport virial_residual(const Sample& before, const Sample& mid, const Sample& after,
                               const Field& weight, const Field& weight_prime, VirialKind kind,
                               double tolerance) {
  double span = after.t - before.t;
  if (!(span > 0.0)) throw std::invalid_argument("virial_residual: bad bracket");

  auto functional = [&](const Field& u) -> double {
    switch (kind) {
      case VirialKind::Energy: {
        SmoothVariable sv = smooth_variable(u);
        Field d = energy_density(sv);
        return weight.grid->spacing() * (d.values * weight.values).sum();
      }
      case VirialKind::Cubic:
        return weight.grid->spacing() * (u.values.cube() * weight.values).sum();
      case VirialKind::Momentum: {
        DerivedFields df = derived_fields(u);
        return weight.grid->spacing() * (df.y.values * weight.values).sum();
      }
    }
    return 0.0;
  };

  double lhs = (functional(after.u) - functional(before.u)) / span;

  DerivedFields df = derived_fields(mid.u);
  const auto& gp = weight_prime.values;
  const double h = mid.u.grid->spacing();
  double rhs_val = 0.0;
  switch (kind) {
    case VirialKind::Energy: {
      Field hx = differentiate(df.h, 1);
      SmoothVariable sv = smooth_variable(mid.u);
      rhs_val = h * (((2.0 / 3.0) * mid.u.values.cube() -
                      4.0 * mid.u.values.square() * sv.v.values + 5.0 * sv.v.values * df.h.values +
                      sv.vx.values * hx.values) *
                     gp)
                        .sum();
      break;
    }
    case VirialKind::Cubic: {
      Field hx = differentiate(df.h, 1);
      rhs_val = h * ((0.75 * mid.u.values.pow(4) +
                      2.25 * (df.h.values.square() - hx.values.square())) *
                     gp)
                        .sum();
      break;
    }
    case VirialKind::Momentum: {
      Field ux = differentiate(mid.u, 1);
      rhs_val = h * ((df.y.values * mid.u.values +
                      1.5 * (mid.u.values.square() - ux.values.square())) *
                     gp)
                        .sum();
      break;
    }
  }
  const char* names[] = {"virial_energy", "virial_cubic", "virial_momentum"};
  return IdentityReport::make(names[static_cast<int>(kind)], lhs, rhs_val, tolerance);
}

}  // namespace dp
