#include "dp/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "dp/fft.hpp"

namespace dp {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

cplx Spectrum::line_coef(std::size_t m) const {
  double sign = (m % 2 == 0) ? 1.0 : -1.0;  // node offset -length/2
  return bins[m] * (sign / static_cast<double>(n()));
}

void Spectrum::set_line_coef(std::size_t m, cplx c) {
  double sign = (m % 2 == 0) ? 1.0 : -1.0;
  bins[m] = c * (sign * static_cast<double>(n()));
}

Spectrum analyze(const Field& f) {
  Spectrum s;
  s.grid = f.grid;
  s.bins.resize(static_cast<std::size_t>(f.n() / 2 + 1));
  fft::real_plan(static_cast<std::size_t>(f.n())).forward(f.values.data(), s.bins.data());
  return s;
}

Field synthesize(const Spectrum& s) {
  Field f(s.grid);
  fft::real_plan(static_cast<std::size_t>(s.n())).inverse(s.bins.data(), f.values.data());
  return f;
}

void differentiate_inplace(Spectrum& s, int order) {
  if (order < 1 || order > 3) throw std::invalid_argument("differentiate: order must be 1, 2 or 3");
  const std::size_t half = s.bins.size() - 1;
  for (std::size_t m = 0; m <= half; ++m) {
    cplx ik(0.0, s.wavenumber(m));
    cplx mult = ik;
    for (int p = 1; p < order; ++p) mult *= ik;
    s.bins[m] *= mult;
  }
  if (order % 2 == 1) s.bins[half] = 0.0;
}

Field differentiate(const Field& f, int order) {
  f.require_finite("differentiate");
  Spectrum s = analyze(f);
  differentiate_inplace(s, order);
  return synthesize(s);
}

void invert_helmholtz_inplace(Spectrum& s, double a) {
  if (a != 1.0 && a != 4.0) throw std::invalid_argument("invert_helmholtz: a must be 1 or 4");
  for (std::size_t m = 0; m < s.bins.size(); ++m) {
    double k = s.wavenumber(m);
    s.bins[m] /= (a + k * k);
  }
}

Field invert_helmholtz(const Field& f, double a) {
  f.require_finite("invert_helmholtz");
  Spectrum s = analyze(f);
  invert_helmholtz_inplace(s, a);
  return synthesize(s);
}

double resolvent_identity_residual(const Field& f) {
  Spectrum s = analyze(f);
  Spectrum lhs = s, r1 = s, r4 = s;
  invert_helmholtz_inplace(lhs, 1.0);
  invert_helmholtz_inplace(lhs, 4.0);
  invert_helmholtz_inplace(r1, 1.0);
  invert_helmholtz_inplace(r4, 4.0);
  for (std::size_t m = 0; m < s.bins.size(); ++m)
    lhs.bins[m] -= (r1.bins[m] - r4.bins[m]) / 3.0;
  Field diff = synthesize(lhs);
  return diff.max_abs();
}

Interpolant::Interpolant(const Field& f) : spec_(analyze(f)) {}
Interpolant::Interpolant(Spectrum s) : spec_(std::move(s)) {}

double Interpolant::eval(double x, int order) const {
  const std::size_t half = spec_.bins.size() - 1;
  const double shift = x + 0.5 * spec_.grid->length();
  double acc = 0.0;
  for (std::size_t m = 0; m <= half; ++m) {
    double k = spec_.wavenumber(m);
    cplx mult(1.0, 0.0);
    for (int p = 0; p < order; ++p) mult *= cplx(0.0, k);
    if (m == half && order % 2 == 1) mult = 0.0;
    cplx term = spec_.bins[m] * mult * std::polar(1.0, k * shift);
    double w = (m == 0 || m == half) ? 1.0 : 2.0;
    acc += w * term.real();
  }
  return acc / static_cast<double>(spec_.n());
}

double cubic_interp(const Field& f, double x) {
  const auto& g = *f.grid;
  const Eigen::Index n = g.n();
  double t = (x + 0.5 * g.length()) / g.spacing();
  double fl = std::floor(t);
  double s = t - fl;
  auto j = static_cast<Eigen::Index>(fl);
  auto wrap = [n](Eigen::Index i) {
    i %= n;
    return i < 0 ? i + n : i;
  };
  double ym1 = f.values[wrap(j - 1)], y0 = f.values[wrap(j)];
  double y1 = f.values[wrap(j + 1)], y2 = f.values[wrap(j + 2)];
  double a = (-s * (s - 1.0) * (s - 2.0)) / 6.0;
  double b = ((s + 1.0) * (s - 1.0) * (s - 2.0)) / 2.0;
  double c = (-(s + 1.0) * s * (s - 2.0)) / 2.0;
  double d = ((s + 1.0) * s * (s - 1.0)) / 6.0;
  return a * ym1 + b * y0 + c * y1 + d * y2;
}

Spectrum dealiased_square(const Spectrum& s) {
  const auto n = static_cast<std::size_t>(s.n());
  const std::size_t half = n / 2;
  const std::size_t n2 = 2 * n;
  std::vector<cplx> pad(n2 / 2 + 1, cplx(0.0, 0.0));
  for (std::size_t m = 0; m < half; ++m) pad[m] = 2.0 * s.bins[m];
  pad[half] = s.bins[half];  // Nyquist splits when upsampling
  std::vector<double> phys(n2);
  const auto& plan2 = fft::real_plan(n2);
  plan2.inverse(pad.data(), phys.data());
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

Field dealiased_square(const Field& f) { return synthesize(dealiased_square(analyze(f))); }

void apply_filter(Spectrum& s, double strength) {
  const std::size_t half = s.bins.size() - 1;
  for (std::size_t m = 1; m <= half; ++m) {
    double r = static_cast<double>(m) / static_cast<double>(half);
    double r4 = (r * r) * (r * r);
    s.bins[m] *= std::exp(-strength * r4 * r4);
  }
}

namespace {
double weighted_inner(const Spectrum& f, const Spectrum& g, bool h_weight) {
  if (!f.grid->same_as(*g.grid)) throw std::invalid_argument("inner: grid mismatch");
  const std::size_t half = f.bins.size() - 1;
  const double norm =
      f.grid->length() / (static_cast<double>(f.n()) * static_cast<double>(f.n()));
  double acc = 0.0;
  for (std::size_t m = 0; m <= half; ++m) {
    double k = f.wavenumber(m);
    double w = h_weight ? (1.0 + k * k) / (4.0 + k * k) : 1.0;
    double re = f.bins[m].real() * g.bins[m].real() + f.bins[m].imag() * g.bins[m].imag();
    double count = (m == 0 || m == half) ? 1.0 : 2.0;
    acc += count * w * re;
  }
  return norm * acc;
}
}  // namespace

double l2_inner(const Spectrum& f, const Spectrum& g) { return weighted_inner(f, g, false); }
double h_inner(const Spectrum& f, const Spectrum& g) { return weighted_inner(f, g, true); }
double h_norm_sq(const Spectrum& f) { return weighted_inner(f, f, true); }

Field upsample(const Field& f, int factor) {
  if (factor < 1 || (factor & (factor - 1)) != 0)
    throw std::invalid_argument("upsample: factor must be a power of two");
  if (factor == 1) return f;
  Spectrum s = analyze(f);
  const auto n = static_cast<std::size_t>(f.n());
  const std::size_t half = n / 2;
  const std::size_t nf = n * static_cast<std::size_t>(factor);
  std::vector<cplx> pad(nf / 2 + 1, cplx(0.0, 0.0));
  const auto scale = static_cast<double>(factor);
  for (std::size_t m = 0; m < half; ++m) pad[m] = scale * s.bins[m];
  pad[half] = 0.5 * scale * s.bins[half];  // Nyquist splits across +-k
  Field out(make_grid(f.grid->length(), static_cast<Eigen::Index>(nf)));
  fft::real_plan(nf).inverse(pad.data(), out.values.data());
  return out;
}

}  // namespace dp
