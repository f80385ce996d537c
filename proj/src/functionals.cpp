#include "dp/functionals.hpp"

#include <cmath>
#include <stdexcept>

#include "dp/warnings.hpp"

namespace dp {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

double rel_gap(double a, double b) {
  double denom = std::max(std::abs(a), std::abs(b));
  return denom > 0.0 ? std::abs(a - b) / denom : 0.0;
}
}  // namespace

Field energy_density(const SmoothVariable& sv) {
  Field out(sv.v.grid);
  out.values = 4.0 * sv.v.values.square() + 5.0 * sv.vx.values.square() + sv.vxx.values.square();
  return out;
}

Field cubic_density_vform(const SmoothVariable& sv) {
  Field out(sv.v.grid);
  const auto& v = sv.v.values;
  const auto& vxx = sv.vxx.values;
  out.values = -vxx.cube() + 12.0 * v * vxx.square() - 48.0 * v.square() * vxx + 64.0 * v.cube();
  return out;
}

ConservedTriple conserved(const Field& u) {
  u.require_finite("conserved");
  ConservedTriple out;
  out.M = quadrature(u);
  SmoothVariable sv = smooth_variable(u);
  out.E = quadrature(energy_density(sv));
  Field u3(u.grid);
  u3.values = u.values.cube();
  out.F = quadrature(u3);
  // cross-checks: E against <y, v>, F against its v-form
  Spectrum s = analyze(u);
  double e_yv = h_norm_sq(s);
  out.e_cross_rel = rel_gap(out.E, e_yv);
  double f_v = quadrature(cubic_density_vform(sv));
  out.f_cross_rel = rel_gap(out.F, f_v);
  return out;
}

double h_norm(const Field& u) {
  double e = h_norm_sq(analyze(u));
  return e > 0.0 ? std::sqrt(e) : 0.0;
}

double psi(double x) {
  if (x > 0.0) return 1.0 - (2.0 / kPi) * std::atan(std::exp(-x / 6.0));
  return (2.0 / kPi) * std::atan(std::exp(x / 6.0));
}

namespace {
double sech6(double x) {
  double u = x / 6.0;
  if (std::abs(u) > 700.0) return 0.0;
  return 1.0 / std::cosh(u);
}
}  // namespace

double psi_prime(double x) { return sech6(x) / (6.0 * kPi); }

double psi_second(double x) {
  double u = x / 6.0;
  double s = sech6(x);
  return -s * std::tanh(u) / (36.0 * kPi);
}

double psi_third(double x) {
  double s = sech6(x);
  return -s * (2.0 * s * s - 1.0) / (216.0 * kPi);
}

double phi_ramp(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 * x;
}

void WeightSpec::validate() const {
  if (!(K > 0.0)) throw std::invalid_argument("weights: K must be positive");
  if (K < 1.0) warnings::emit("weight scale K below 1: outside the analysis regime");
  if (centers.empty()) throw std::invalid_argument("weights: no centers");
  for (std::size_t i = 1; i < centers.size(); ++i)
    if (!(centers[i] > centers[i - 1]))
      throw std::invalid_argument("weights: centers must be strictly increasing");
  if (lambda < 0.0) throw std::invalid_argument("weights: lambda must be nonnegative");
}

double WeightSpec::window(std::size_t i, double x) const {
  if (i >= centers.size()) throw std::out_of_range("weights: window index");
  double w = psi_k(x - centers[i]);
  if (i + 1 < centers.size()) w -= psi_k(x - centers[i + 1]);
  return w;
}

LocalizedPair localized_pair(const Field& u, const WeightSpec& spec, std::size_t i) {
  spec.validate();
  if (i >= spec.windows()) throw std::out_of_range("localized_pair: window index");
  SmoothVariable sv = smooth_variable(u);
  Field edens = energy_density(sv);
  Field fdens = cubic_density_vform(sv);
  const auto& g = *u.grid;
  double e = 0.0, f = 0.0;
  for (Eigen::Index j = 0; j < g.n(); ++j) {
    double w = spec.window(i, g.node(j));
    e += edens.values[j] * w;
    f += fdens.values[j] * w;
  }
  return {g.spacing() * e, g.spacing() * f};
}

double j_functional(const Field& u, const WeightSpec& spec, std::size_t j) {
  spec.validate();
  if (j >= spec.windows()) throw std::out_of_range("j_functional: window index");
  SmoothVariable sv = smooth_variable(u);
  Field edens = energy_density(sv);
  const auto& g = *u.grid;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < g.n(); ++i) {
    double w = spec.psi_k(g.node(i) - spec.centers[j]);
    double ui = u.values[i];
    acc += (edens.values[i] - spec.lambda * ui * ui * ui) * w;
  }
  return g.spacing() * acc;
}

double peakon_energy(double c) { return c * c / 3.0; }
double peakon_cubic(double c) { return 2.0 * c * c * c / 3.0; }
double peakon_mass(double c) { return 2.0 * c; }

namespace {

/// Above-Nyquist H-content of the peakon train itself (the grid carries no
/// u-content there). Terms fall off like k^-4; a fixed cap plus an envelope
/// remainder keeps the truncation orders of magnitude below test tolerances.
double tail_sum(const Spectrum& u, const std::vector<double>& c,
                const std::vector<double>& shifts) {
  const double len = u.grid->length();
  const auto half = static_cast<std::size_t>(u.n() / 2);
  const std::size_t cap = half + 65536;
  double acc = 0.0;
  double norm1 = 0.0;
  for (double cj : c) norm1 += std::abs(cj);
  for (std::size_t m = half + 1; m <= cap; ++m) {
    double k = 2.0 * kPi * static_cast<double>(m) / len;
    double k2 = k * k;
    double p2;
    if (c.size() == 1) {
      double p = 2.0 * c[0] / (len * (1.0 + k2));
      p2 = p * p;
    } else {
      cplx p(0.0, 0.0);
      for (std::size_t j = 0; j < c.size(); ++j)
        p += (2.0 * c[j] / len) * std::polar(1.0, -k * shifts[j]);
      p /= (1.0 + k2);
      p2 = std::norm(p);
    }
    acc += 2.0 * len * p2 * (1.0 + k2) / (4.0 + k2);
  }
  double k_cap = 2.0 * kPi * static_cast<double>(cap) / len;
  acc += (8.0 * norm1 * norm1 / (2.0 * kPi)) / (3.0 * k_cap * k_cap * k_cap);
  return acc;
}

}  // namespace

double train_h_dist_sq(const Spectrum& u, const std::vector<double>& c,
                       const std::vector<double>& shifts) {
  if (c.size() != shifts.size()) throw std::invalid_argument("train_h_dist_sq: size mismatch");
  const double len = u.grid->length();
  const auto half = static_cast<std::size_t>(u.n() / 2);
  double acc = 0.0;
  for (std::size_t m = 0; m <= half; ++m) {
    double k = u.wavenumber(m);
    cplx p(0.0, 0.0);
    for (std::size_t j = 0; j < c.size(); ++j)
      p += (2.0 * c[j] / len) * std::polar(1.0, -k * shifts[j]) / (1.0 + k * k);
    cplx diff = u.line_coef(m) - p;
    double w = (1.0 + k * k) / (4.0 + k * k);
    double count = (m == 0 || m == half) ? 1.0 : 2.0;
    acc += count * w * std::norm(diff) * len;
  }
  return acc + tail_sum(u, c, shifts);
}

double peakon_h_dist_sq(const Spectrum& u, double c, double shift) {
  return train_h_dist_sq(u, {c}, {shift});
}

double train_linf_dist(const Field& u, const std::vector<double>& c,
                       const std::vector<double>& shifts) {
  const auto& g = *u.grid;
  auto train_at = [&](double x) {
    double s = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j)
      s += c[j] * std::exp(-std::abs(g.min_image(x, shifts[j])));
    return s;
  };
  double best = 0.0;
  for (Eigen::Index j = 0; j < g.n(); ++j)
    best = std::max(best, std::abs(u.values[j] - train_at(g.node(j))));
  Interpolant interp(u);
  for (double z : shifts) best = std::max(best, std::abs(interp(z) - train_at(z)));
  return best;
}

double peakon_linf_dist(const Field& u, double c, double shift) {
  return train_linf_dist(u, {c}, {shift});
}

}  // namespace dp
