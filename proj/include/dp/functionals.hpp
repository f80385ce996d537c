#pragma once

#include <vector>

#include "dp/grid.hpp"
#include "dp/helmholtz.hpp"
#include "dp/spectral.hpp"

namespace dp {

/// The three conserved quantities. E and F carry cross-check residuals
/// between their two algebraic forms.
struct ConservedTriple {
  double M = 0.0;
  double E = 0.0;  // integral of 4v^2 + 5vx^2 + vxx^2
  double F = 0.0;  // integral of u^3
  double e_cross_rel = 0.0;  // vs integral of y*v
  double f_cross_rel = 0.0;  // vs the v-form of F
};

ConservedTriple conserved(const Field& u);

/// sqrt(E(u)).
double h_norm(const Field& u);

/// Energy density 4v^2 + 5vx^2 + vxx^2 as a field.
Field energy_density(const SmoothVariable& sv);
/// v-form density of F: -vxx^3 + 12 v vxx^2 - 48 v^2 vxx + 64 v^3.
Field cubic_density_vform(const SmoothVariable& sv);

// --- weights --------------------------------------------------------------

/// Psi(x) = (2/pi) atan(exp(x/6)); increases 0 -> 1, Psi(-x) = 1 - Psi(x).
double psi(double x);
double psi_prime(double x);
double psi_second(double x);
double psi_third(double x);

/// Piecewise linear ramp: 0 for x<=0, x/2 on [0,2], 1 for x>=2.
double phi_ramp(double x);

/// Scaled weight family Psi_K = Psi(./K) with window centers y_j.
/// K >= 1 is the analysis regime; smaller K is accepted with a warning.
struct WeightSpec {
  double K = 1.0;
  std::vector<double> centers;  // strictly increasing
  double lambda = 0.0;

  void validate() const;
  double psi_k(double x) const { return psi(x / K); }
  double psi_k_prime(double x) const { return psi_prime(x / K) / K; }
  /// Window weight Phi_i = Psi_K(x - y_i) - Psi_K(x - y_{i+1}) (last window
  /// has no right edge).
  double window(std::size_t i, double x) const;
  std::size_t windows() const { return centers.size(); }
};

/// Localized (E_i, F_i): densities integrated against window i.
struct LocalizedPair {
  double E = 0.0;
  double F = 0.0;
};
LocalizedPair localized_pair(const Field& u, const WeightSpec& spec, std::size_t i);

/// J_{j,lambda,K} = integral of [ (4v^2+5vx^2+vxx^2) - lambda u^3 ] Psi_K(x - y_j).
double j_functional(const Field& u, const WeightSpec& spec, std::size_t j);

// --- exact peakon family -------------------------------------------------

/// E(phi_c) = c^2/3, F(phi_c) = 2c^3/3, M(phi_c) = 2c on the line.
double peakon_energy(double c);
double peakon_cubic(double c);
double peakon_mass(double c);

/// ||u - phi_c(. - shift)||_H^2 via exact periodized peakon coefficients,
/// including the peakon's above-Nyquist tail.
double peakon_h_dist_sq(const Spectrum& u, double c, double shift);

/// Same against a sum of peakons.
double train_h_dist_sq(const Spectrum& u, const std::vector<double>& c,
                       const std::vector<double>& shifts);

/// sup-norm distance ||u - phi_c(. - shift)||_inf over nodes and the crest.
double peakon_linf_dist(const Field& u, double c, double shift);
double train_linf_dist(const Field& u, const std::vector<double>& c,
                       const std::vector<double>& shifts);

}  // namespace dp
