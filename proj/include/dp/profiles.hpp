#pragma once

#include <optional>
#include <vector>

#include "dp/grid.hpp"
#include "dp/spectral.hpp"

namespace dp {

/// Ordered wave speeds c_{-N-} < .. < c_{-1} < 0 < c_1 < .. < c_{N+} and
/// matching shifts with pairwise gaps >= separation.
struct TrainSpec {
  std::vector<double> velocities;
  std::vector<double> shifts;
  double separation = 0.0;

  void validate() const;  // throws on any invariant violation
  std::size_t size() const { return velocities.size(); }
  int n_negative() const;
  int n_positive() const { return static_cast<int>(size()) - n_negative(); }
  double norm1() const;  // sum |c_j|
  double sigma() const;  // min consecutive speed gap, with c_0 = 0 inserted
  double min_abs_edge_speed() const;  // min(c_1, |c_{-1}|)
};

/// Certified sign structure of a momentum field: y <= tol left of x0,
/// y >= -tol right of x0.
struct SignStructure {
  double x0 = 0.0;
  double tol = 0.0;
};

struct SignViolation {
  double positive_node = 0.0;  // y > tol here ...
  double negative_node = 0.0;  // ... while y < -tol further right
};

/// c * exp(-|x - x0|) sampled with the min-image periodic distance.
Field peakon(double c, double x0, const GridPtr& grid);

/// (c/3) e^{-|x-x0|} - (c/6) e^{-2|x-x0|}, the resolvent image of the peakon.
Field smooth_peakon(double c, double x0, const GridPtr& grid);

/// -(1/(t+k)) sgn(x) exp(-|x|). The node at x = 0 samples to 0.
Field shock_peakon(double k, double t, const GridPtr& grid);

/// Superposition of peakons per the spec (min-image sampling).
Field train(const TrainSpec& spec, const GridPtr& grid);

/// Smooth peakon approximation: momentum 2c*delta mollified at width 1/moll_n
/// and shifted by +-1/moll_n so the sign structure survives with the same x0.
/// Evaluated pointwise by quadrature of the exact convolution.
Field mollified_peakon(double c, double x0, int moll_n, const GridPtr& grid);

/// Sum of mollified peakons.
Field mollified_train(const TrainSpec& spec, int moll_n, const GridPtr& grid);

/// The resolvent image (4-dxx)^{-1} of mollified_peakon, evaluated pointwise
/// (reference profile for tests).
Field mollified_smooth_peakon(double c, double x0, int moll_n, const GridPtr& grid);

/// u = p * y_n where y_n mollifies y_neg shifted left and y_pos shifted
/// right by 1/moll_n. Returns u and its mollified momentum.
struct MollifiedData {
  Field u;
  Field y;
  double x0 = 0.0;
};
MollifiedData mollified_from_momentum(const Field& y_neg, const Field& y_pos, int moll_n);

/// Locates the smallest admissible sign-change point of y, or reports the
/// first interleaving witness. tol < 0 selects the default 1e-10 * max|y|.
std::optional<SignStructure> check_hypothesis1(const Field& y, double tol,
                                               SignViolation* violation = nullptr);

/// Compactly supported momentum bump of the mollifier shape: mass one,
/// width w, centered at x0.  u = p * bump is available pointwise.
Field momentum_bump(double x0, double w, const GridPtr& grid);
Field velocity_of_momentum_bump(double x0, double w, const GridPtr& grid);

/// Band-limited periodized peakon built from its exact line coefficients
/// 2c e^{-i k x0} / (L (1+k^2)) (identity-suite comparisons).
Field band_limited_peakon(double c, double x0, const GridPtr& grid);

/// |u| at the box edge relative to max|u|; emits a warning above 1e-8.
double boundary_leak_ratio(const Field& u);

}  // namespace dp
