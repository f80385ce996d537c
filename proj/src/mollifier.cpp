#include "dp/mollifier.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace dp::mollifier {

namespace {

// 24-point Gauss-Legendre nodes/weights on [-1,1], generated once by Newton
// iteration on P_24.
struct GaussRule {
  std::array<double, 24> x{};
  std::array<double, 24> w{};
  GaussRule() {
    const int n = 24;
    for (int i = 0; i < n; ++i) {
      double t = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = t;
        for (int j = 2; j <= n; ++j) {
          double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-16) break;
      }
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1.0);
      x[i] = t;
      w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};

const GaussRule& rule() {
  static const GaussRule r;
  return r;
}

/// Composite Gauss-Legendre of f over [a,b] with the given panel count.
template <typename F>
double gauss(F&& f, double a, double b, int panels) {
  const auto& r = rule();
  double acc = 0.0;
  double hp = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double mid = a + (p + 0.5) * hp;
    double halfw = 0.5 * hp;
    for (int i = 0; i < 24; ++i) acc += r.w[i] * f(mid + halfw * r.x[i]) * halfw;
  }
  return acc;
}

int panels_for(double oscillation) {
  int p = static_cast<int>(std::ceil(std::abs(oscillation) / 6.0));
  return p < 4 ? 4 : p;
}

}  // namespace

double bump(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 / (s * s - 1.0));
}

double normalization() {
  static const double z = gauss([](double s) { return bump(s); }, -1.0, 1.0, 8);
  return z;
}

double fourier(double kappa) {
  double z = normalization();
  double v = gauss([kappa](double s) { return bump(s) * std::cos(kappa * s); }, 0.0, 1.0,
                   panels_for(kappa));
  return 2.0 * v / z;
}

double mgf(double lambda) {
  double z = normalization();
  double v = gauss([lambda](double s) { return bump(s) * std::exp(lambda * s); }, -1.0, 1.0, 8);
  return v / z;
}

double exp_kernel_conv(double z, double w, double a) {
  if (std::abs(z) >= w) return std::exp(-a * std::abs(z)) * mgf(a * w);
  const double zn = normalization();
  double split = z / w;
  // s < z/w: |z - w s| = z - w s ; s > z/w: w s - z.
  double left =
      gauss([=](double s) { return bump(s) * std::exp(-a * (z - w * s)); }, -1.0, split, 6);
  double right =
      gauss([=](double s) { return bump(s) * std::exp(-a * (w * s - z)); }, split, 1.0, 6);
  return (left + right) / zn;
}

}  // namespace dp::mollifier
