#include "dp/helmholtz.hpp"

namespace dp {

DerivedFields derived_fields(const Field& u) {
  u.require_finite("derived_fields");
  DerivedFields out;
  out.u = u;
  Spectrum s = analyze(u);
  Spectrum ys = s;
  const std::size_t half = s.bins.size() - 1;
  for (std::size_t m = 0; m <= half; ++m) {
    double k = ys.wavenumber(m);
    ys.bins[m] *= (1.0 + k * k);
  }
  out.y = synthesize(ys);
  Spectrum vs = s;
  invert_helmholtz_inplace(vs, 4.0);
  out.v = synthesize(vs);
  Spectrum hs = dealiased_square(s);
  invert_helmholtz_inplace(hs, 1.0);
  out.h = synthesize(hs);
  return out;
}

SmoothVariable smooth_variable(const Spectrum& u_hat) {
  Spectrum vs = u_hat;
  invert_helmholtz_inplace(vs, 4.0);
  SmoothVariable out;
  out.v = synthesize(vs);
  Spectrum d1 = vs;
  differentiate_inplace(d1, 1);
  out.vx = synthesize(d1);
  Spectrum d2 = vs;
  differentiate_inplace(d2, 2);
  out.vxx = synthesize(d2);
  return out;
}

SmoothVariable smooth_variable(const Field& u) { return smooth_variable(analyze(u)); }

}  // namespace dp
