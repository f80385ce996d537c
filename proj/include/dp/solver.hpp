#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "dp/diagnostics.hpp"
#include "dp/grid.hpp"
#include "dp/helmholtz.hpp"
#include "dp/identities.hpp"
#include "dp/spectral.hpp"

namespace dp {

struct SolverConfig {
  double cfl = 0.3;              // dt = cfl * spacing / max(1, max|u|)
  bool filter_on = true;
  double filter_strength = 36.0; // exp(-strength) damping at Nyquist
  double blowup_max = 1e6;
};

struct SimState {
  double t = 0.0;
  Field u;
  double dt = 0.0;
  long step_count = 0;
};

class BlowupError : public std::runtime_error {
 public:
  BlowupError(double t, long step, double amplitude)
      : std::runtime_error("solution blow-up detected"), t(t), step(step), amplitude(amplitude) {}
  double t;
  long step;
  double amplitude;
};

/// Right-hand side of the nonlocal evolution:
/// -(1/2) d/dx (u^2) - (3/2) d/dx (1 - dxx)^{-1} (u^2), u^2 dealiased.
Field rhs(const Field& u);

/// One classical RK4 step at the CFL time step (no-op when dt = 0).
SimState step(const SimState& state, const SolverConfig& cfg = {});

/// Characteristic points advanced in lockstep with the solver.
struct FlowTracker {
  std::vector<double> positions;       // unwrapped
  std::vector<Trajectory> trajectories;
};

struct EvolveResult {
  SimState final_state;
  History samples;                     // includes t = 0 and t = T
  std::vector<Trajectory> tracked;     // one per tracked point
};

/// Repeated stepping to time T with observer samples every out_every steps
/// (plus the exact endpoint). track_points, when nonempty, are integrated
/// through the interpolated velocity field as characteristics.
EvolveResult evolve(const SimState& initial, double T, const SolverConfig& cfg,
                    int out_every, const std::vector<double>& track_points = {},
                    const std::function<void(const SimState&)>& observer = {});

/// Post-hoc characteristic integration through a densely stored history
/// (trigonometric interpolation in space, linear in time).
Trajectory flow_map(const History& history, double x_init);

struct SmoothVariableCheck {
  double residual_half = 0.0;  // |dv/dt + (1/2) h_x| / |(1/2) h_x|
  double residual_full = 0.0;  // |dv/dt + h_x| / |h_x|
  IdentityReport report;       // pass when the -h_x/2 form matches
};

/// Time-differences v across a bracket of states and compares against the
/// two candidate forms of the smooth-variable evolution.
SmoothVariableCheck smooth_variable_rhs_check(const Sample& before, const Sample& mid,
                                              const Sample& after);

enum class VirialKind { Energy, Cubic, Momentum };

/// Centered time-difference of the weighted functional vs the quadrature of
/// its stated rate at the midpoint, for a static weight g. The weight and
/// its derivative are supplied analytically (Psi is not box-periodic, so a
/// spectral derivative of it would ring).
IdentityReport virial_residual(const Sample& before, const Sample& mid, const Sample& after,
                               const Field& weight, const Field& weight_prime, VirialKind kind,
                               double tolerance);

}  // namespace dp
