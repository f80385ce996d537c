#pragma once

#include <cstddef>

namespace dp::mollifier {

/// The compactly supported bump exp(1/(s^2-1)) on (-1,1), unnormalized.
double bump(double s);

/// Normalization constant Z = integral of bump over (-1,1).
double normalization();

/// Fourier transform of the unit-mass bump, (1/Z) * int bump(s) cos(kappa s) ds.
double fourier(double kappa);

/// (1/Z) * int bump(s) exp(lambda s) ds.
double mgf(double lambda);

/// int rho_w(t) exp(-a |z - t|) dt for the unit-mass bump scaled to width w.
/// Exact exponential closed form outside |z| < w, split Gauss-Legendre inside.
double exp_kernel_conv(double z, double w, double a);

}  // namespace dp::mollifier
