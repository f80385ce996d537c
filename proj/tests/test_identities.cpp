#include <doctest.h>

#include <cmath>
#include <random>

#include "dp/diagnostics.hpp"
#include "dp/functionals.hpp"
#include "dp/identities.hpp"
#include "dp/profiles.hpp"

using namespace dp;

namespace {

Field perturbed_peakon(const GridPtr& g, double c, unsigned seed, double amp) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(3.0, 14.0);
  std::uniform_real_distribution<double> wdist(0.8, 2.0);
  Field u = mollified_peakon(c, 0.0, 32, g);
  Field neg = velocity_of_momentum_bump(-pos(rng), wdist(rng), g);
  Field posb = velocity_of_momentum_bump(pos(rng), wdist(rng), g);
  u.values += amp * (posb.values - neg.values);
  return u;
}

}  // namespace

TEST_SUITE_BEGIN("identities");

TEST_CASE("g and h vanish against the peakon limit") {
  auto g = make_grid(60.0, 8192);
  Field u = mollified_peakon(1.0, 0.0, 64, g);
  Field v = invert_helmholtz(u, 4.0);
  ArgmaxResult am = argmax_refined(v, 0.0, -1.0);
  Field gp = g_profile(u, am.x);
  // exact peakon makes g identically zero; mollification leaves a small bump
  CHECK(gp.max_abs() < 5e-2);
  CHECK(g_profile(zero_field(g), 0.0).max_abs() == 0.0);
  CHECK(h_profile(zero_field(g), 0.0).max_abs() == 0.0);

  // h at the crest approaches 18 M = 3c and stays below 18M + tol
  Field hp = h_profile(u, am.x);
  double M = Interpolant(v)(am.x);
  CHECK(hp.values[g->nearest_index(am.x)] == doctest::Approx(3.0).epsilon(2e-2));
  CHECK(hp.values.maxCoeff() <= 18.0 * M + 5e-2);
}

TEST_CASE("g-square identity: exact at critical points, quadratic in vx away") {
  auto g = make_grid(60.0, 4096);
  Field u = perturbed_peakon(g, 1.0, 42, 0.02);
  Field v = invert_helmholtz(u, 4.0);
  ArgmaxResult am = argmax_refined(v, 0.0, -1.0);

  GSquareCheck at_max = g_square_check(u, am.x);
  double e_scale = std::abs(at_max.at_critical_value) + 1.0 / 3.0;
  CHECK(std::abs(at_max.integral - at_max.at_critical_value) < 1e-6 * e_scale);

  // away from the argmax the defect follows 6 vx(xi)^2 exactly
  double prev_defect = 0.0;
  for (double off : {0.4, 0.8, 1.6}) {
    GSquareCheck gc = g_square_check(u, am.x + off);
    double defect = std::abs(gc.integral - gc.at_critical_value);
    CHECK(std::abs(gc.integral - gc.identity_value) < 1e-6 * e_scale);
    CHECK(defect == doctest::Approx(6.0 * gc.vx_at_xi * gc.vx_at_xi).epsilon(1e-4));
    CHECK(defect > prev_defect);
    prev_defect = defect;
  }
}

TEST_CASE("quadratic identity on scaled and perturbed data") {
  auto g = make_grid(60.0, 8192);
  Field u = mollified_peakon(1.0, 0.0, 64, g);

  IdentityReport self = quadratic_identity(u, 1.0, 1e-6);
  // both sides are near zero for the self case; residual only quadrature
  CHECK(std::abs(self.lhs) < 2e-4);
  CHECK(std::abs(self.residual) < 1e-8);

  Field scaled(g);
  scaled.values = 1.1 * u.values;
  IdentityReport sc = quadratic_identity(scaled, 1.0, 1e-6);
  CHECK(sc.lhs == doctest::Approx((1.1 * 1.1 - 1.0) / 3.0).epsilon(1e-3));
  CHECK(sc.pass);
  CHECK(sc.rel_residual < 1e-6);

  for (unsigned seed : {1u, 2u, 3u, 4u}) {
    Field up = perturbed_peakon(g, 1.0, seed, 0.01);
    IdentityReport r = quadratic_identity(up, 1.0, 1e-6);
    CHECK(r.pass);
  }
}

TEST_CASE("improvement form agrees with the g-square integral") {
  auto g = make_grid(60.0, 8192);
  for (unsigned seed : {5u, 6u}) {
    Field u = perturbed_peakon(g, 1.0, seed, 0.02);
    IdentityReport r = improvement_identity(u, 1.0, 1e-6);
    CHECK(r.pass);
  }
}

TEST_CASE("train quadratic identity") {
  auto g = make_grid(128.0, 4096);
  const double L = 30.0;
  TrainSpec spec{{-1.0, 1.0}, {-L / 2.0, L / 2.0}, L};

  // exact sampled train evaluated at the true crest points
  Field u = mollified_train(spec, 16, g);
  auto rep = train_quadratic_identity(u, spec, {-L / 2.0 - 1.0 / 16, L / 2.0 + 1.0 / 16});
  CHECK(rep.report.pass);
  CHECK(rep.cross_term_bound == doctest::Approx(2.0 * std::exp(-20.0)).epsilon(1e-12));
  CHECK(rep.report.residual <= rep.cross_term_bound + 1e-7);

  // single-entry spec reduces to the quadratic identity
  TrainSpec single{{1.0}, {0.0}, 0.0};
  Field us = mollified_peakon(1.0, 0.0, 32, g);
  Field v = invert_helmholtz(us, 4.0);
  ArgmaxResult am = argmax_refined(v, 0.0, -1.0);
  auto rep1 = train_quadratic_identity(us, single, {am.x});
  IdentityReport plain = quadratic_identity(us, 1.0, 1e-6);
  CHECK(rep1.report.lhs == doctest::Approx(plain.lhs).epsilon(1e-10));
  CHECK(rep1.report.rhs == doctest::Approx(plain.rhs).epsilon(1e-8));

  CHECK_THROWS(train_quadratic_identity(u, spec, {-1.0, 1.0}));  // gaps below L/2
}

TEST_CASE("cubic bound and its peakon factorization") {
  auto g = make_grid(60.0, 8192);
  Field u = mollified_peakon(1.0, 0.0, 64, g);
  CubicBoundReport rep = cubic_bound(u, 1.0, 1e-4);
  CHECK(rep.factorization.pass);  // algebraic identity, machine exact
  CHECK(std::abs(rep.factorization.lhs) < 1e-10);
  CHECK(rep.bound.pass);

  // M = c/6 exactly makes the factorized form vanish (double root)
  double c = 1.0, M = c / 6.0;
  CHECK((c / 6.0 - M) * (c / 6.0 - M) * (M + c / 3.0) == 0.0);

  // scaled perturbation family: |c/6 - M| tracks the eps^2 pattern
  double prev = -1.0;
  for (double amp : {0.02, 0.01, 0.005}) {
    Field up = perturbed_peakon(g, 1.0, 9, amp);
    Field v = invert_helmholtz(up, 4.0);
    ArgmaxResult am = argmax_refined(v, 0.0, -1.0);
    double dev = std::abs(Interpolant(v)(am.x) - 1.0 / 6.0);
    if (prev >= 0.0) CHECK(dev <= prev * 1.05);
    prev = dev;
  }

  CHECK_THROWS(cubic_bound(u, 1.0, 0.0));
}

TEST_CASE("E and F move at most linearly with the H-distance") {
  auto g = make_grid(60.0, 4096);
  const double c = 1.0;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> amp(0.002, 0.08);
  int tested = 0;
  for (unsigned seed = 0; seed < 50; ++seed) {
    Field u = perturbed_peakon(g, c, 200 + seed, amp(rng));
    OrbitalDistance od = orbital_distance(u, c);
    double gamma = od.distance_at_xi;
    if (gamma > 0.1) continue;
    ConservedTriple t = conserved(u);
    CHECK(std::abs(t.E - peakon_energy(c)) <= 2.0 * gamma * (2.0 + c) + 1e-3);
    CHECK(std::abs(t.F - peakon_cubic(c)) <= 6.0 * gamma * (2.0 + c) * (2.0 + c) + 1e-3);
    ++tested;
  }
  CHECK(tested >= 40);
}

TEST_CASE("localized identities scale like 1/sqrt(L)") {
  // train plus a fixed-shape positive bump at the weight transition point;
  // the bump pins an L-independent density where the window derivative acts,
  // exposing the K^{-1} envelope.
  std::vector<double> L_values = {25.0, 100.0, 400.0};
  std::vector<double> g_residual, hg_residual;
  for (double L : L_values) {
    double len = 2.0 * L;
    auto n = static_cast<Eigen::Index>(1) << static_cast<int>(std::ceil(std::log2(len / 0.03)));
    auto g = make_grid(len, n);
    TrainSpec spec{{-1.0, 1.0}, {-L / 2.0, L / 2.0}, L};
    Field u = mollified_train(spec, 16, g);
    double y1 = L / 2.0 - L / 4.0;
    Field bump = velocity_of_momentum_bump(y1, 1.0, g);
    u.values += 0.1 * bump.values;

    Field v = invert_helmholtz(u, 4.0);
    double xi_neg = argmax_refined(v, -L / 2.0 - 3.0, -L / 2.0 + 3.0, ExtremumKind::Min).x;
    double xi_pos = argmax_refined(v, L / 2.0 - 3.0, L / 2.0 + 3.0, ExtremumKind::Max).x;
    WeightSpec ws{std::sqrt(L) / 8.0, {y1}, 0.0};
    auto reports = localized_identity_suite(u, spec, ws, {xi_neg, xi_pos});
    REQUIRE(reports.size() == 1);
    g_residual.push_back(reports[0].g_window.residual);
    hg_residual.push_back(reports[0].hg_window.residual);
    CHECK(reports[0].g_window.pass);
    CHECK(reports[0].hg_window.pass);
    CHECK(reports[0].cubic_margin > -1e-3);
  }
  std::vector<double> logL, log_g, log_hg;
  for (std::size_t i = 0; i < L_values.size(); ++i) {
    logL.push_back(std::log(L_values[i]));
    log_g.push_back(std::log(g_residual[i]));
    log_hg.push_back(std::log(hg_residual[i]));
  }
  double slope_g = fit_slope(logL, log_g);
  double slope_hg = fit_slope(logL, log_hg);
  CHECK(slope_g == doctest::Approx(-0.5).epsilon(0.3));
  CHECK(slope_hg == doctest::Approx(-0.5).epsilon(0.3));

  // zero field: all residuals vanish
  auto g0 = make_grid(50.0, 2048);
  TrainSpec sp0{{-1.0, 1.0}, {-12.5, 12.5}, 25.0};
  WeightSpec ws0{std::sqrt(25.0) / 8.0, {6.25}, 0.0};
  auto zero_reports = localized_identity_suite(zero_field(g0), sp0, ws0, {-12.5, 12.5});
  CHECK(zero_reports[0].g_window.residual == doctest::Approx(0.0));
  CHECK(zero_reports[0].hg_window.residual == doctest::Approx(0.0));
}

TEST_CASE("identity report bookkeeping") {
  IdentityReport r = IdentityReport::make("demo", 1.0, 1.0 + 1e-8, 1e-6);
  CHECK(r.pass);
  CHECK(r.rel_residual == doctest::Approx(1e-8).epsilon(1e-3));
  IdentityReport bad = IdentityReport::make("demo2", 1.0, 1.1, 1e-6);
  CHECK(!bad.pass);
  IdentityReport zero = IdentityReport::make("near_zero", 0.0, 1e-12, 1e-6);
  CHECK(zero.pass);  // absolute fallback
  CHECK(to_csv(r).find("demo") == 0);
  CHECK(identity_csv_header().find("name") == 0);
}

TEST_SUITE_END();
