#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "dp/grid.hpp"
#include "dp/helmholtz.hpp"
#include "dp/profiles.hpp"
#include "dp/spectral.hpp"

using namespace dp;

namespace {
constexpr double kPi = 3.14159265358979323846;

Field random_band_limited(const GridPtr& g, unsigned seed, int max_mode) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Spectrum s;
  s.grid = g;
  s.bins.assign(static_cast<std::size_t>(g->n() / 2 + 1), cplx(0.0, 0.0));
  for (int m = 1; m <= max_mode; ++m)
    s.bins[static_cast<std::size_t>(m)] =
        cplx(unif(rng), unif(rng)) * static_cast<double>(g->n());
  return synthesize(s);
}
}  // namespace

TEST_SUITE_BEGIN("helmholtz");

TEST_CASE("cosine eigenfunctions") {
  auto g = make_grid(2.0 * kPi, 128);
  const double k = 4.0;
  Field f = sample(g, [&](double x) { return std::cos(k * x); });
  Field v1 = invert_helmholtz(f, 1.0);
  Field v4 = invert_helmholtz(f, 4.0);
  for (Eigen::Index j = 0; j < g->n(); ++j) {
    double c = std::cos(k * g->node(j));
    CHECK(v1.values[j] == doctest::Approx(c / (1.0 + k * k)).epsilon(1e-12));
    CHECK(v4.values[j] == doctest::Approx(c / (4.0 + k * k)).epsilon(1e-12));
  }
  CHECK_THROWS(invert_helmholtz(f, 2.0));
}

TEST_CASE("agrees with a dense solve of the collocation system") {
  // independent oracle: assemble the dense spectral (a - D^2) matrix from the
  // closed-form second-derivative kernel and LU-solve.
  const Eigen::Index n = 128;
  auto g = make_grid(25.0, n);
  Field f = random_band_limited(g, 77, 16);
  for (double a : {1.0, 4.0}) {
    Eigen::MatrixXd op(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index l = 0; l < n; ++l) {
        double acc = 0.0;
        for (Eigen::Index m = 1; m <= n / 2; ++m) {
          double k = 2.0 * kPi * double(m) / g->length();
          double w = (m == n / 2) ? 1.0 : 2.0;
          acc += w * k * k * std::cos(k * (g->node(j) - g->node(l)));
        }
        op(j, l) = acc / double(n) + (j == l ? a : 0.0);
      }
    }
    Eigen::VectorXd rhs = f.values.matrix();
    Eigen::VectorXd sol = op.partialPivLu().solve(rhs);
    Field spectral = invert_helmholtz(f, a);
    for (Eigen::Index j = 0; j < n; ++j)
      CHECK(spectral.values[j] == doctest::Approx(sol[j]).epsilon(1e-10));
  }
}

TEST_CASE("resolvent identity residual is machine small") {
  auto g = make_grid(40.0, 256);
  Field zero(g);
  CHECK(resolvent_identity_residual(zero) == 0.0);

  Field f = sample(g, [&](double x) { return std::cos(2.0 * kPi * 5.0 * x / 40.0); });
  CHECK(resolvent_identity_residual(f) < 1e-13 * f.max_abs());

  for (unsigned seed : {1u, 2u, 3u}) {
    Field r = random_band_limited(g, seed, 100);
    CHECK(resolvent_identity_residual(r) <= 1e-12 * r.max_abs());
  }
}

TEST_CASE("mollified peakon maps to the mollified smooth profile under a=4") {
  auto g = make_grid(60.0, 8192);
  const double c = 1.3;
  Field u = mollified_peakon(c, 0.0, 64, g);
  Field v = invert_helmholtz(u, 4.0);
  Field ref = mollified_smooth_peakon(c, 0.0, 64, g);
  double scale = ref.max_abs();
  CHECK((v.values - ref.values).abs().maxCoeff() < 1e-6 * scale);

  // and the unmollified smooth peakon is within the mollification error
  Field rho = smooth_peakon(c, 1.0 / 64.0, g);
  CHECK((v.values - rho.values).abs().maxCoeff() < 1e-4 * scale);
}

TEST_CASE("derived fields: round-trips, positivity, |h_x| <= h") {
  auto g = make_grid(60.0, 4096);
  Field u = mollified_peakon(1.0, -3.0, 16, g);
  DerivedFields df = derived_fields(u);

  // (4 - dxx) v == u and (1 - dxx) h == u^2 as discrete round-trips
  Field v_chk(g);
  v_chk.values = 4.0 * df.v.values - differentiate(df.v, 2).values;
  CHECK((v_chk.values - u.values).abs().maxCoeff() < 1e-8 * u.max_abs());
  Field h_chk(g);
  h_chk.values = df.h.values - differentiate(df.h, 2).values;
  Field usq = dealiased_square(u);
  CHECK((h_chk.values - usq.values).abs().maxCoeff() < 1e-8 * usq.max_abs());

  Field hx = differentiate(df.h, 1);
  CHECK((hx.values.abs() - df.h.values - 1e-10).maxCoeff() < 0.0);

  // positivity preservation of both kernels
  Field pos(g);
  pos.values = u.values.abs();
  CHECK(invert_helmholtz(pos, 1.0).values.minCoeff() > -1e-12);
  CHECK(invert_helmholtz(pos, 4.0).values.minCoeff() > -1e-12);

  Field zero(g);
  DerivedFields dz = derived_fields(zero);
  CHECK(dz.y.max_abs() == 0.0);
  CHECK(dz.v.max_abs() == 0.0);
  CHECK(dz.h.max_abs() == 0.0);
}

TEST_CASE("y of a cosine is (1+k^2) cosine") {
  auto g = make_grid(2.0 * kPi, 64);
  const double k = 3.0;
  Field u = sample(g, [&](double x) { return std::cos(k * x); });
  DerivedFields df = derived_fields(u);
  for (Eigen::Index j = 0; j < g->n(); ++j)
    CHECK(df.y.values[j] ==
          doctest::Approx((1.0 + k * k) * std::cos(k * g->node(j))).epsilon(1e-11));
}

TEST_CASE("self-adjointness of both resolvents") {
  auto g = make_grid(40.0, 512);
  Field f = random_band_limited(g, 31, 60);
  Field h = random_band_limited(g, 32, 60);
  for (double a : {1.0, 4.0}) {
    Field rf = invert_helmholtz(f, a);
    Field rh = invert_helmholtz(h, a);
    Field fg(g), gf(g);
    fg.values = f.values * rh.values;
    gf.values = h.values * rf.values;
    double lhs = quadrature(fg), rhs = quadrature(gf);
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(std::abs(lhs), 1.0));
  }
}

TEST_CASE("two routes to the energy agree") {
  auto g = make_grid(60.0, 4096);
  Field u = mollified_peakon(0.8, 2.0, 32, g);
  DerivedFields df = derived_fields(u);
  Field yv(g);
  yv.values = df.y.values * df.v.values;
  double e_yv = quadrature(yv);
  SmoothVariable sv = smooth_variable(u);
  Field dens(g);
  dens.values =
      4.0 * sv.v.values.square() + 5.0 * sv.vx.values.square() + sv.vxx.values.square();
  double e_form = quadrature(dens);
  CHECK(std::abs(e_yv - e_form) < 1e-8 * std::abs(e_form));
}

TEST_SUITE_END();
