#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dp/functionals.hpp"
#include "dp/grid.hpp"
#include "dp/profiles.hpp"

namespace dp {

enum class ExtremumKind { Max, Min };

struct ArgmaxResult {
  double x = 0.0;
  double value = 0.0;
  bool degenerate = false;  // flat window: x is the window center
};

/// Discrete extremum over [lo, hi] (whole box when lo >= hi), refined by a
/// 3-point parabolic fit and, when possible, polished by Newton iteration on
/// the trigonometric interpolant.
ArgmaxResult argmax_refined(const Field& v, double lo, double hi,
                            ExtremumKind kind = ExtremumKind::Max, bool polish = true);

struct OrbitalDistance {
  double distance = 0.0;     // min over shifts of ||u - phi_c(.-r)||_H
  double shift = 0.0;        // the minimizing shift
  double distance_at_xi = 0.0;  // distance at the argmax of v
  double xi = 0.0;
};

/// H-distance to the peakon family: coarse node scan of the cross
/// correlation, golden-section refinement, plus the value at the v-argmax.
OrbitalDistance orbital_distance(const Field& u, double c);

struct MassSplit {
  double pos = 0.0;
  double neg = 0.0;
  double total_l1 = 0.0;
};

/// Clipped positive/negative L1 masses over [window_left, box right]
/// (whole box when window_left is unset).
MassSplit y_mass_split(const Field& y, std::optional<double> window_left = std::nullopt);

/// integral of v(x) rho'(x - xi) dx with rho the unit smooth peakon; a
/// diagnostic of how far an argmax modulation point sits from the
/// orthogonality-based one.
double orthogonality_residual(const Field& v, double xi, double c);

// --- run-level diagnostics over stored histories ---------------------------

struct Sample {
  double t = 0.0;
  Field u;
};

using History = std::vector<Sample>;

struct Trajectory {
  std::string label;
  std::vector<double> times;
  std::vector<double> positions;  // unwrapped
};

struct ModulationTrack {
  std::vector<int> indices;           // train indices, negatives first
  std::vector<ExtremumKind> kinds;    // Min for antipeakons
  std::vector<Trajectory> xi;         // one per index
  std::vector<double> mean_speeds;    // least-squares slopes
  bool ordering_ok = true;
  bool speed_band_ok = true;          // |dxi/dt - c_i| <= sigma/8 at all samples
  double collision_time = -1.0;       // >= 0 when tracking aborted
};

/// Windowed argmax/argmin tracking of every train bump; windows are
/// re-centered on the previous location each sample (half-width L/4).
ModulationTrack train_track(const History& history, const TrainSpec& spec);

struct DecayWindowReport {
  double t = 0.0;
  double window_left = 0.0;   // xi(t) - c t/16
  double mass = 0.0;          // ||y^-||_L1 right of window_left
  double bound = 0.0;         // e^{-c t/8} ||y(0)||_L1
  double u_minus_6v_max = 0.0;  // max of u - 6v on ]xi(t)-8, box right]
};

/// Per-sample window decay series for a single tracked bump of speed c.
std::vector<DecayWindowReport> decay_window_series(const History& history,
                                                   const Trajectory& xi, double c);

struct MonotonicitySeries {
  std::vector<double> times;
  // J series per (window j, lambda in {0, cap}); flattened [j][lambda]
  std::vector<std::vector<double>> j_series;
  std::vector<double> lambdas;
  std::vector<double> max_forward_increment;  // per series
  std::vector<double> e_gamma_m_series;       // E + (c1/2^9) M weighted sum
  double e_gamma_m_increment = 0.0;
};

/// J_{j,lambda,K} series along a tracked train with the weight curves
/// y_1(t) = xi_1(0) + c_1 t/2 - L/4 and midpoints for j >= 2.
MonotonicitySeries monotonicity_series(const History& history, const TrainSpec& spec,
                                       const ModulationTrack& track, double K);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace dp
