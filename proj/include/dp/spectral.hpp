#pragma once

#include <complex>
#include <vector>

#include "dp/grid.hpp"

namespace dp {

using cplx = std::complex<double>;

/// Half-spectrum of a real Field (raw unnormalized DFT bins 0..n/2).
/// Bin m carries wavenumber k_m = 2*pi*m/length.
struct Spectrum {
  GridPtr grid;
  std::vector<cplx> bins;

  Eigen::Index n() const { return grid->n(); }
  double wavenumber(std::size_t m) const {
    return 2.0 * 3.14159265358979323846264338327950288 * static_cast<double>(m) / grid->length();
  }
  /// Coefficient c_m of the line synthesis u(x) = sum_m c_m exp(i k_m x)
  /// (absorbs the -length/2 node offset).
  cplx line_coef(std::size_t m) const;
  /// Sets bin m from a line coefficient.
  void set_line_coef(std::size_t m, cplx c);
};

Spectrum analyze(const Field& f);
Field synthesize(const Spectrum& s);

/// Spectral derivative of the stated order (1..3). The Nyquist bin is
/// zeroed for odd orders.
Field differentiate(const Field& f, int order);
void differentiate_inplace(Spectrum& s, int order);

/// (a - d^2/dx^2)^{-1} f via the 1/(a + k^2) multiplier, a in {1, 4}.
Field invert_helmholtz(const Field& f, double a);
void invert_helmholtz_inplace(Spectrum& s, double a);

/// max-norm residual of the operator identity
/// (4-dxx)^{-1}(1-dxx)^{-1} - ( (1-dxx)^{-1} - (4-dxx)^{-1} )/3 applied to f.
double resolvent_identity_residual(const Field& f);

/// Trigonometric interpolation of f (and derivatives) at arbitrary x.
class Interpolant {
 public:
  explicit Interpolant(const Field& f);
  explicit Interpolant(Spectrum s);
  double operator()(double x) const { return eval(x, 0); }
  double eval(double x, int order) const;
  const Spectrum& spectrum() const { return spec_; }

 private:
  Spectrum spec_;
};

/// Local cubic (4-point Lagrange) interpolation; cheap O(1) evaluation with
/// O(h^4) error on smooth data. Used by the characteristic integrator.
double cubic_interp(const Field& f, double x);

/// Pointwise square with 2x zero-padding, so no quadratic aliasing ever
/// reaches the retained bins.
Field dealiased_square(const Field& f);
Spectrum dealiased_square(const Spectrum& s);

/// Exponential high-mode filter exp(-strength * (m/m_max)^p), p = 8.
void apply_filter(Spectrum& s, double strength);

/// Discrete L2 inner product over the box computed in spectral space;
/// equals quadrature(f*g) for band-limited data.
double l2_inner(const Spectrum& f, const Spectrum& g);

/// H-inner product <f,g> = integral of (1-dxx)f * (4-dxx)^{-1} g, computed
/// mode-wise with the weight (1+k^2)/(4+k^2).
double h_inner(const Spectrum& f, const Spectrum& g);
double h_norm_sq(const Spectrum& f);

/// Upsamples f onto a grid refined by the (power-of-two) factor.
Field upsample(const Field& f, int factor);

}  // namespace dp
