#include "dp/scenario.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <algorithm>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "dp/diagnostics.hpp"
#include "dp/functionals.hpp"
#include "dp/identities.hpp"
#include "dp/mollifier.hpp"
#include "dp/solver.hpp"
#include "dp/warnings.hpp"

namespace dp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::map<std::string, ScenarioKind> kKinds = {
    {"identities", ScenarioKind::Identities},
    {"single_peakon", ScenarioKind::SinglePeakon},
    {"antipeakon_peakon", ScenarioKind::AntipeakonPeakon},
    {"train", ScenarioKind::Train},
    {"shock", ScenarioKind::Shock},
    {"sweep", ScenarioKind::Sweep},
};

std::string kind_name(ScenarioKind k) {
  for (const auto& [name, kind] : kKinds)
    if (kind == k) return name;
  return "?";
}

const std::map<std::string, PerturbationShape> kShapes = {
    {"none", PerturbationShape::None},
    {"bump", PerturbationShape::Bump},
    {"left_negative_momentum", PerturbationShape::LeftNegativeMomentum},
};

std::string shape_name(PerturbationShape s) {
  for (const auto& [name, shape] : kShapes)
    if (shape == s) return name;
  return "?";
}

bool is_pow2(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const json& j) {
  ScenarioConfig c;
  if (j.contains("scenario")) {
    auto it = kKinds.find(j.at("scenario").get<std::string>());
    if (it == kKinds.end()) throw std::invalid_argument("unknown scenario name");
    c.scenario = it->second;
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    c.grid.length = g.value("length", c.grid.length);
    c.grid.n = g.value("n", static_cast<long long>(c.grid.n));
  }
  if (j.contains("time")) {
    const auto& t = j.at("time");
    c.time.T = t.value("T", c.time.T);
    c.time.cfl = t.value("cfl", c.time.cfl);
    c.time.out_every = t.value("out_every", c.time.out_every);
  }
  if (j.contains("profile")) {
    const auto& p = j.at("profile");
    c.profile.c = p.value("c", c.profile.c);
    c.profile.x0 = p.value("x0", c.profile.x0);
    c.profile.mollify_n = p.value("mollify_n", c.profile.mollify_n);
    c.profile.velocities = p.value("velocities", c.profile.velocities);
    c.profile.shifts = p.value("shifts", c.profile.shifts);
    c.profile.separation = p.value("separation", c.profile.separation);
    c.profile.shock_k = p.value("shock_k", c.profile.shock_k);
    c.profile.shock_width = p.value("shock_width", c.profile.shock_width);
  }
  if (j.contains("perturbation")) {
    const auto& p = j.at("perturbation");
    if (p.contains("shape")) {
      auto it = kShapes.find(p.at("shape").get<std::string>());
      if (it == kShapes.end()) throw std::invalid_argument("unknown perturbation shape");
      c.perturbation.shape = it->second;
    }
    c.perturbation.amplitude = p.value("amplitude", c.perturbation.amplitude);
    c.perturbation.center = p.value("center", c.perturbation.center);
    c.perturbation.width = p.value("width", c.perturbation.width);
  }
  if (j.contains("diagnostics")) {
    const auto& d = j.at("diagnostics");
    c.diagnostics.modulation = d.value("modulation", c.diagnostics.modulation);
    c.diagnostics.decay_window = d.value("decay_window", c.diagnostics.decay_window);
    c.diagnostics.monotonicity = d.value("monotonicity", c.diagnostics.monotonicity);
    c.diagnostics.weight_K = d.value("weight_K", c.diagnostics.weight_K);
    c.diagnostics.filter = d.value("filter", c.diagnostics.filter);
  }
  c.seed = j.value("seed", c.seed);
  c.output_dir = j.value("output_dir", c.output_dir);
  if (j.contains("runs")) {
    for (const auto& r : j.at("runs")) c.sweep_runs.push_back(r);
  }
  return c;
}

json ScenarioConfig::to_json() const {
  json j;
  j["scenario"] = kind_name(scenario);
  j["grid"] = {{"length", grid.length}, {"n", static_cast<long long>(grid.n)}};
  j["time"] = {{"T", time.T}, {"cfl", time.cfl}, {"out_every", time.out_every}};
  j["profile"] = {{"c", profile.c},
                  {"x0", profile.x0},
                  {"mollify_n", profile.mollify_n},
                  {"velocities", profile.velocities},
                  {"shifts", profile.shifts},
                  {"separation", profile.separation},
                  {"shock_k", profile.shock_k},
                  {"shock_width", profile.shock_width}};
  j["perturbation"] = {{"shape", shape_name(perturbation.shape)},
                       {"amplitude", perturbation.amplitude},
                       {"center", perturbation.center},
                       {"width", perturbation.width}};
  j["diagnostics"] = {{"modulation", diagnostics.modulation},
                      {"decay_window", diagnostics.decay_window},
                      {"monotonicity", diagnostics.monotonicity},
                      {"weight_K", diagnostics.weight_K},
                      {"filter", diagnostics.filter}};
  j["seed"] = seed;
  j["output_dir"] = output_dir;
  if (!sweep_runs.empty()) j["runs"] = sweep_runs;
  return j;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config " + path);
  json j = json::parse(is);
  return from_json(j);
}

std::vector<std::string> validate(const ScenarioConfig& c) {
  std::vector<std::string> problems;
  if (!(c.grid.length > 0.0)) problems.push_back("grid.length: must be positive");
  if (!is_pow2(c.grid.n) || c.grid.n < 16)
    problems.push_back("grid.n: must be a power of two >= 16");
  if (c.time.T < 0.0) problems.push_back("time.T: must be nonnegative");
  if (!(c.time.cfl > 0.0 && c.time.cfl <= 0.9))
    problems.push_back("time.cfl: must lie in (0, 0.9]");
  if (c.time.out_every < 1) problems.push_back("time.out_every: must be >= 1");
  if (c.profile.mollify_n < 1) problems.push_back("profile.mollify_n: must be >= 1");
  if (c.grid.length / static_cast<double>(c.grid.n) >
      0.5 / static_cast<double>(c.profile.mollify_n))
    problems.push_back("grid: spacing exceeds half the mollifier width 1/mollify_n");
  if (c.perturbation.shape != PerturbationShape::None && c.perturbation.amplitude < 0.0)
    problems.push_back("perturbation.amplitude: must be nonnegative");
  if (c.perturbation.shape != PerturbationShape::None && !(c.perturbation.width > 0.0))
    problems.push_back("perturbation.width: must be positive");

  const bool is_train =
      c.scenario == ScenarioKind::AntipeakonPeakon || c.scenario == ScenarioKind::Train;
  if (is_train) {
    TrainSpec spec{c.profile.velocities, c.profile.shifts, c.profile.separation};
    try {
      spec.validate();
    } catch (const std::exception& e) {
      problems.push_back(std::string("profile: ") + e.what());
    }
    if (c.scenario == ScenarioKind::AntipeakonPeakon &&
        (c.profile.velocities.size() != 2 || c.profile.velocities.front() >= 0.0 ||
         c.profile.velocities.back() <= 0.0))
      problems.push_back("profile.velocities: antipeakon_peakon needs one negative, one positive");
  }
  if (c.scenario == ScenarioKind::SinglePeakon && c.profile.c == 0.0)
    problems.push_back("profile.c: must be nonzero");
  if (c.scenario == ScenarioKind::Shock && !(c.profile.shock_k > 0.0))
    problems.push_back("profile.shock_k: must be positive");
  if (c.scenario == ScenarioKind::Sweep && c.sweep_runs.empty())
    problems.push_back("runs: sweep needs at least one run patch");
  return problems;
}

// --- output helpers --------------------------------------------------------

namespace {

std::string fnv1a64_bytes(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

struct OutputDir {
  fs::path root;
  std::vector<std::string> files;

  explicit OutputDir(const std::string& dir) : root(dir) { fs::create_directories(root); }

  std::ofstream open(const std::string& name) {
    files.push_back(name);
    std::ofstream os(root / name);
    os.precision(17);
    return os;
  }

  void finish(RunManifest& manifest) {
    manifest.files = files;
    manifest.hashes.clear();
    for (const auto& f : manifest.files)
      manifest.hashes.push_back(fnv1a64_file((root / f).string()));
  }
};

double position_at(const Trajectory& traj, double t) {
  auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t - 1e-12);
  if (it == traj.times.end()) return traj.positions.back();
  return traj.positions[static_cast<std::size_t>(it - traj.times.begin())];
}

struct DiagnosticsRow {
  double t = 0.0;
  double M = 0.0, E = 0.0, F = 0.0, Hnorm = 0.0;
  double maxu = 0.0, minu = 0.0;
  std::vector<double> xi;
  double x0 = 0.0;
  double ymass_pos = 0.0, ymass_neg = 0.0;
  std::vector<double> J;

  json to_json() const {
    return json{{"t", t},       {"M", M},
                {"E", E},       {"F", F},
                {"Hnorm", Hnorm}, {"maxu", maxu},
                {"minu", minu}, {"xi", xi},
                {"x0", x0},     {"ymass_pos", ymass_pos},
                {"ymass_neg", ymass_neg}, {"J", J}};
  }
};

/// Hypothesis-1 compatible perturbation in momentum space, scaled to the
/// requested H-norm. Negative shapes keep their support strictly left of
/// positive momentum by construction (caller places the center).
Field build_perturbation(const PerturbationConfig& p, const GridPtr& grid) {
  if (p.shape == PerturbationShape::None || p.amplitude == 0.0) return zero_field(grid);
  Field vel = velocity_of_momentum_bump(p.center, p.width, grid);
  double norm = h_norm(vel);
  double scale = p.amplitude / norm;
  if (p.shape == PerturbationShape::LeftNegativeMomentum) scale = -scale;
  Field out(grid);
  out.values = scale * vel.values;
  return out;
}

Field initial_field(const ScenarioConfig& c, const GridPtr& grid) {
  switch (c.scenario) {
    case ScenarioKind::SinglePeakon: {
      Field u = mollified_peakon(c.profile.c, c.profile.x0, c.profile.mollify_n, grid);
      Field pert = build_perturbation(c.perturbation, grid);
      u.values += pert.values;
      return u;
    }
    case ScenarioKind::AntipeakonPeakon:
    case ScenarioKind::Train: {
      TrainSpec spec{c.profile.velocities, c.profile.shifts, c.profile.separation};
      Field u = mollified_train(spec, c.profile.mollify_n, grid);
      Field pert = build_perturbation(c.perturbation, grid);
      u.values += pert.values;
      return u;
    }
    case ScenarioKind::Shock: {
      // sharp initial data mollified at shock_width so the jump is resolved
      Field raw = shock_peakon(c.profile.shock_k, 0.0, grid);
      Spectrum s = analyze(raw);
      const std::size_t half = s.bins.size() - 1;
      for (std::size_t m = 0; m <= half; ++m) {
        double k = s.wavenumber(m);
        s.bins[m] *= mollifier::fourier(k * c.profile.shock_width);
      }
      return synthesize(s);
    }
    default:
      throw std::invalid_argument("initial_field: scenario has no field");
  }
}

void write_gnuplot_script(OutputDir& out, const std::string& scenario) {
  auto os = out.open("plots.gp");
  os << "# gnuplot script for the " << scenario << " run artifacts\n";
  os << "set datafile separator comma\n";
  os << "set key left top\n";
  os << "set term pngcairo size 1100,700\n";
  os << "set output 'summary.png'\n";
  os << "set multiplot layout 2,2\n";
  os << "set title 'conserved drift'\n";
  os << "plot 'series.csv' using 1:3 with lines title 'E', '' using 1:2 with lines title 'M', "
        "'' using 1:4 with lines title 'F'\n";
  os << "set title 'amplitude'\n";
  os << "plot 'series.csv' using 1:6 with lines title 'max u', '' using 1:7 with lines title "
        "'min u'\n";
  os << "set title 'modulation'\n";
  os << "plot 'series.csv' using 1:8 with lines title 'xi_1'\n";
  os << "set title 'negative momentum mass'\n";
  os << "plot 'series.csv' using 1:10 with lines title 'y^-'\n";
  os << "unset multiplot\n";
}

}  // namespace

std::string fnv1a64_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return fnv1a64_bytes(ss.str());
}

// --- scenario bodies --------------------------------------------------------

namespace {

void run_identities(const ScenarioConfig& c, OutputDir& out, RunManifest& manifest) {
  std::mt19937_64 rng(c.seed);
  auto grid = make_grid(c.grid.length, c.grid.n);
  auto csv = out.open("identities.csv");
  csv << identity_csv_header() << '\n';
  std::vector<IdentityReport> reports;

  // resolvent identity on random band-limited fields
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Spectrum s;
    s.grid = grid;
    s.bins.assign(static_cast<std::size_t>(grid->n() / 2 + 1), cplx(0.0, 0.0));
    for (std::size_t m = 1; m < std::min<std::size_t>(s.bins.size() - 1,
                                                      static_cast<std::size_t>(grid->n() / 8));
         ++m)
      s.bins[m] = cplx(unif(rng), unif(rng)) * static_cast<double>(grid->n()) /
                  (1.0 + static_cast<double>(m));
    Field f = synthesize(s);
    double res = resolvent_identity_residual(f);
    IdentityReport r;
    r.name = "resolvent_" + std::to_string(trial);
    r.lhs = res;
    r.rhs = 0.0;
    r.residual = res;
    r.tolerance = 1e-12 * f.max_abs();
    r.rel_residual = res / std::max(f.max_abs(), 1e-300);
    r.pass = res <= r.tolerance;
    reports.push_back(r);
  }

  // randomized Hypothesis-1 fields near the unit peakon
  std::uniform_real_distribution<double> amp(1e-3, 5e-2);
  std::uniform_real_distribution<double> pos(2.0, 12.0);
  std::uniform_real_distribution<double> wdist(0.8, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    Field u = mollified_peakon(1.0, 0.0, c.profile.mollify_n, grid);
    int nbump = 1 + static_cast<int>(rng() % 3);
    for (int b = 0; b < nbump; ++b) {
      double a = amp(rng), w = wdist(rng);
      Field neg = velocity_of_momentum_bump(-pos(rng) - 2.0, w, grid);
      Field posb = velocity_of_momentum_bump(pos(rng) + 2.0, w, grid);
      u.values += a * (posb.values - neg.values);
    }
    reports.push_back(quadratic_identity(u, 1.0, 1e-6));
    Field v = invert_helmholtz(u, 4.0);
    ArgmaxResult am = argmax_refined(v, 0.0, -1.0);
    GSquareCheck gc = g_square_check(u, am.x);
    reports.push_back(IdentityReport::make("g_square_" + std::to_string(trial), gc.integral,
                                           gc.at_critical_value, 1e-5));
    reports.push_back(improvement_identity(u, 1.0, 1e-6));
  }

  bool all = true;
  for (const auto& r : reports) {
    csv << to_csv(r) << '\n';
    all = all && r.pass;
    manifest.checks.push_back({r.name, r.pass, r.rel_residual, r.tolerance});
  }
  manifest.rollup = all;
}

struct SeriesWriter {
  std::ofstream os;
  explicit SeriesWriter(OutputDir& out) : os(out.open("series.csv")) {
    os << "t,M,E,F,Hnorm,maxu,minu,xi1,x0,ymass_neg\n";
  }
  void row(const DiagnosticsRow& r) {
    os << r.t << ',' << r.M << ',' << r.E << ',' << r.F << ',' << r.Hnorm << ',' << r.maxu << ','
       << r.minu << ',' << (r.xi.empty() ? 0.0 : r.xi.front()) << ',' << r.x0 << ','
       << r.ymass_neg << '\n';
  }
};

void check(RunManifest& m, const std::string& name, bool pass, double value, double bound) {
  m.checks.push_back({name, pass, value, bound});
}

void run_evolution(const ScenarioConfig& c, OutputDir& out, RunManifest& manifest) {
  auto grid = make_grid(c.grid.length, c.grid.n);
  Field u0 = initial_field(c, grid);
  boundary_leak_ratio(u0);

  SolverConfig scfg;
  scfg.cfl = c.time.cfl;
  scfg.filter_on = c.diagnostics.filter;

  const bool is_train =
      c.scenario == ScenarioKind::AntipeakonPeakon || c.scenario == ScenarioKind::Train;
  const bool is_shock = c.scenario == ScenarioKind::Shock;

  // initial sign structure and flow-map anchor
  DerivedFields df0 = derived_fields(u0);
  std::optional<SignStructure> sign0;
  if (!is_shock) {
    sign0 = check_hypothesis1(df0.y, 1e-6 * df0.y.max_abs());
    if (!sign0) throw std::runtime_error("initial data violates the sign hypothesis");
  }

  std::vector<double> track;
  if (sign0) track.push_back(sign0->x0);

  SimState st;
  st.u = u0;
  EvolveResult ev = evolve(st, c.time.T, scfg, c.time.out_every, track);

  // per-sample diagnostics
  TrainSpec spec;
  if (is_train) spec = TrainSpec{c.profile.velocities, c.profile.shifts, c.profile.separation};
  ModulationTrack mt;
  if (is_train && c.diagnostics.modulation) mt = train_track(ev.samples, spec);

  SeriesWriter series(out);
  auto jsonl = out.open("diagnostics.jsonl");
  ConservedTriple cons0 = conserved(u0);
  double h0 = std::sqrt(std::max(0.0, cons0.E));
  double y0_l1 = y_mass_split(df0.y).total_l1;
  double u0_linf = u0.max_abs();
  double u0_l2 = std::sqrt(quadrature(Field{grid, u0.values.square()}));

  double max_drift = 0.0;
  bool sign_ok = true;
  bool linf_bound_ok = true;
  bool ymass_bound_ok = true;
  double max_dist = 0.0;
  double linf_envelope_c = 0.0;
  std::vector<double> times, xi1;

  const double cref = is_train ? spec.velocities.back() : c.profile.c;
  for (std::size_t i = 0; i < ev.samples.size(); ++i) {
    const auto& snap = ev.samples[i];
    DerivedFields df = derived_fields(snap.u);
    ConservedTriple cons = conserved(snap.u);
    DiagnosticsRow row;
    row.t = snap.t;
    row.M = cons.M;
    row.E = cons.E;
    row.F = cons.F;
    row.Hnorm = std::sqrt(std::max(0.0, cons.E));
    row.maxu = snap.u.values.maxCoeff();
    row.minu = snap.u.values.minCoeff();
    row.x0 = ev.tracked.empty() ? 0.0 : position_at(ev.tracked.front(), snap.t);
    MassSplit ms = y_mass_split(df.y);
    row.ymass_pos = ms.pos;
    row.ymass_neg = ms.neg;

    if (is_train && !mt.xi.empty() && i < mt.xi.front().times.size()) {
      for (const auto& traj : mt.xi) row.xi.push_back(traj.positions[i]);
    } else if (!is_shock) {
      ArgmaxResult am = argmax_refined(df.v, 0.0, -1.0,
                                       cref > 0.0 ? ExtremumKind::Max : ExtremumKind::Min);
      row.xi.push_back(am.x);
    }
    if (!row.xi.empty()) {
      times.push_back(snap.t);
      xi1.push_back(row.xi.front());
    }

    double drift = std::max({std::abs(cons.M - cons0.M) / std::max(std::abs(cons0.M), 1e-12),
                             std::abs(cons.E - cons0.E) / std::max(std::abs(cons0.E), 1e-12),
                             std::abs(cons.F - cons0.F) / std::max(std::abs(cons0.F), 1e-12)});
    max_drift = std::max(max_drift, drift);

    if (!is_shock) {
      auto sg = check_hypothesis1(df.y, 1e-6 * df.y.max_abs());
      if (!sg) sign_ok = false;
      if (snap.u.max_abs() > 2.0 * (1.0 + std::sqrt(2.0)) * h0 * 1.01) linf_bound_ok = false;
      double ybound = std::exp(3.0 * snap.t * snap.t * u0_l2 + 2.0 * snap.t * u0_linf) * y0_l1;
      if (ms.total_l1 > ybound * 1.01 + 1e-12) ymass_bound_ok = false;
    }

    if (c.scenario == ScenarioKind::SinglePeakon) {
      OrbitalDistance od = orbital_distance(snap.u, c.profile.c);
      double d = od.distance_at_xi;
      max_dist = std::max(max_dist, d);
      double linf = peakon_linf_dist(snap.u, c.profile.c, od.xi);
      if (d > 0.0) linf_envelope_c = std::max(linf_envelope_c, linf / std::pow(d, 2.0 / 3.0));
    }

    series.row(row);
    jsonl << row.to_json().dump() << '\n';
  }

  check(manifest, "conserved_drift", max_drift <= 1e-4, max_drift, 1e-4);
  if (!is_shock) {
    check(manifest, "sign_structure_certified", sign_ok, sign_ok ? 1.0 : 0.0, 1.0);
    check(manifest, "sup_norm_apriori", linf_bound_ok, linf_bound_ok ? 1.0 : 0.0, 1.0);
    check(manifest, "momentum_mass_growth", ymass_bound_ok, ymass_bound_ok ? 1.0 : 0.0, 1.0);
  }

  if (c.scenario == ScenarioKind::SinglePeakon) {
    if (c.perturbation.shape != PerturbationShape::None && c.perturbation.amplitude > 0.0) {
      double envelope = 20.0 * std::sqrt(c.perturbation.amplitude);
      check(manifest, "orbital_stability_envelope", max_dist <= envelope, max_dist, envelope);
      double cap = 8.0 * (2.0 + c.profile.c) * (2.0 + c.profile.c);
      check(manifest, "sup_norm_envelope", linf_envelope_c <= cap, linf_envelope_c, cap);
    }
    if (times.size() >= 3 && c.time.T > 0.0) {
      double speed = fit_slope(times, xi1);
      check(manifest, "crest_speed", std::abs(speed - c.profile.c) <= 0.01 * std::abs(c.profile.c),
            speed, c.profile.c);
    }
  }

  if (is_train && c.diagnostics.modulation) {
    check(manifest, "bump_ordering", mt.ordering_ok && mt.collision_time < 0.0,
          mt.collision_time, 0.0);
    check(manifest, "speed_band", mt.speed_band_ok, mt.speed_band_ok ? 1.0 : 0.0, 1.0);
    if (spec.size() == 2 && mt.xi.size() == 2 && mt.xi[0].times.size() >= 3) {
      std::vector<double> gap(mt.xi[0].times.size());
      std::vector<double> tg = mt.xi[0].times;
      for (std::size_t i = 0; i < gap.size(); ++i)
        gap[i] = mt.xi[1].positions[i] - mt.xi[0].positions[i];
      // slope after transients: fit on t >= 2
      std::vector<double> tt, gg;
      for (std::size_t i = 0; i < gap.size(); ++i)
        if (tg[i] >= 2.0) {
          tt.push_back(tg[i]);
          gg.push_back(gap[i]);
        }
      if (tt.size() >= 2) {
        double slope = fit_slope(tt, gg);
        double target = 0.9 * 0.5 *
                        (spec.velocities.back() - spec.velocities.front());
        check(manifest, "gap_growth", slope >= target, slope, target);
      }
    }
    if (c.diagnostics.monotonicity && !mt.xi.empty()) {
      double K = c.diagnostics.weight_K > 0.0 ? c.diagnostics.weight_K
                                              : std::sqrt(spec.separation) / 8.0;
      MonotonicitySeries mono = monotonicity_series(ev.samples, spec, mt, K);
      auto jcsv = out.open("monotonicity.csv");
      jcsv << "t";
      for (std::size_t sidx = 0; sidx < mono.j_series.size(); ++sidx) jcsv << ",J" << sidx;
      jcsv << ",E_gamma_M\n";
      for (std::size_t i = 0; i < mono.times.size(); ++i) {
        jcsv << mono.times[i];
        for (const auto& ser : mono.j_series) jcsv << ',' << ser[i];
        jcsv << ',' << mono.e_gamma_m_series[i] << '\n';
      }
      double envelope = 10.0 * std::exp(-spec.separation / (48.0 * K));
      double worst = 0.0;
      for (double inc : mono.max_forward_increment) worst = std::max(worst, inc);
      check(manifest, "j_monotonicity", worst <= envelope, worst, envelope);
    }
    // terminal distance to the translated train
    std::vector<double> xi_final;
    for (const auto& traj : mt.xi) xi_final.push_back(traj.positions.back());
    if (xi_final.size() == spec.size()) {
      double d2 = train_h_dist_sq(analyze(ev.samples.back().u), spec.velocities, xi_final);
      double dT = std::sqrt(std::max(0.0, d2));
      std::vector<double> xi_init;
      for (const auto& traj : mt.xi) xi_init.push_back(traj.positions.front());
      double d0 = std::sqrt(std::max(
          0.0, train_h_dist_sq(analyze(ev.samples.front().u), spec.velocities, xi_init)));
      double bound = 5.0 * d0 + 1.0 * std::pow(spec.separation, -0.125);
      check(manifest, "train_distance", dT <= bound, dT, bound);
    }
  }

  if (c.diagnostics.decay_window && c.scenario == ScenarioKind::SinglePeakon &&
      c.perturbation.shape == PerturbationShape::LeftNegativeMomentum) {
    Trajectory xi_traj;
    xi_traj.label = "modulation(1)";
    xi_traj.times = times;
    xi_traj.positions = xi1;
    auto reps = decay_window_series(ev.samples, xi_traj, c.profile.c);
    auto dcsv = out.open("decay_window.csv");
    dcsv << "t,window_left,mass,bound,u_minus_6v_max\n";
    bool window_ok = true;
    double mass0 = y_mass_split(df0.y).neg;
    for (const auto& r : reps) {
      dcsv << r.t << ',' << r.window_left << ',' << r.mass << ',' << r.bound << ','
           << r.u_minus_6v_max << '\n';
      if (r.mass > r.bound + 1e-8 * y0_l1) window_ok = false;
    }
    double floor = 1e-8 * y0_l1;
    double final_bound =
        2.0 * std::exp(-c.profile.c * c.time.T / 16.0) * mass0 + floor;
    check(manifest, "window_decay", window_ok && reps.back().mass <= final_bound,
          reps.back().mass, final_bound);
  }

  if (is_shock) {
    bool ok = true;
    double worst = 0.0;
    for (const auto& snap : ev.samples) {
      double expect = 1.0 / (snap.t + c.profile.shock_k);
      double got = snap.u.max_abs();
      double rel = std::abs(got - expect) / expect;
      worst = std::max(worst, rel);
      if (rel > 0.05) ok = false;
    }
    check(manifest, "shock_amplitude_decay", ok, worst, 0.05);
  }

  // field snapshots at the ends
  write_binary(ev.samples.front().u, (out.root / "u_initial.bin").string());
  out.files.push_back("u_initial.bin");
  write_binary(ev.samples.back().u, (out.root / "u_final.bin").string());
  out.files.push_back("u_final.bin");

  manifest.rollup = true;
  for (const auto& ch : manifest.checks) manifest.rollup = manifest.rollup && ch.pass;
}

}  // namespace

RunManifest run(const ScenarioConfig& config) {
  auto t_start = std::chrono::steady_clock::now();
  auto problems = validate(config);
  if (!problems.empty()) {
    std::string msg = "invalid config:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw std::invalid_argument(msg);
  }
  if (config.scenario == ScenarioKind::Sweep) return run_sweep(config, 1);

  RunManifest manifest;
  manifest.version = kToolVersion;
  manifest.config_echo = config.to_json();
  OutputDir out(config.output_dir);

  if (config.scenario == ScenarioKind::Identities) {
    run_identities(config, out, manifest);
  } else {
    run_evolution(config, out, manifest);
  }
  write_gnuplot_script(out, kind_name(config.scenario));

  manifest.warnings = warnings::drain();
  out.finish(manifest);
  manifest.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  std::ofstream os(fs::path(config.output_dir) / "manifest.json");
  os << manifest.to_json().dump(2) << '\n';
  return manifest;
}

RunManifest run_sweep(const ScenarioConfig& config, int jobs) {
  auto t_start = std::chrono::steady_clock::now();
  RunManifest manifest;
  manifest.version = kToolVersion;
  manifest.config_echo = config.to_json();

  std::vector<ScenarioConfig> runs;
  for (std::size_t i = 0; i < config.sweep_runs.size(); ++i) {
    json merged = config.to_json();
    merged.erase("runs");
    merged.merge_patch(config.sweep_runs[i]);
    ScenarioConfig sub = ScenarioConfig::from_json(merged);
    if (sub.scenario == ScenarioKind::Sweep)
      throw std::invalid_argument("sweep: nested sweeps are not allowed");
    std::string name = config.sweep_runs[i].value("name", "run" + std::to_string(i));
    sub.output_dir = (fs::path(config.output_dir) / name).string();
    runs.push_back(std::move(sub));
  }

  std::vector<RunManifest> results(runs.size());
  std::vector<std::string> errors(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= runs.size()) return;
      try {
        results[i] = run(runs[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(runs.size())));
  std::vector<std::thread> pool;
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  manifest.rollup = true;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    bool ok = errors[i].empty() && results[i].rollup;
    check(manifest, "run:" + runs[i].output_dir, ok, ok ? 1.0 : 0.0, 1.0);
    manifest.rollup = manifest.rollup && ok;
    if (!errors[i].empty()) manifest.warnings.push_back(runs[i].output_dir + ": " + errors[i]);
  }
  fs::create_directories(config.output_dir);
  manifest.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  std::ofstream os(fs::path(config.output_dir) / "manifest.json");
  os << manifest.to_json().dump(2) << '\n';
  return manifest;
}

json RunManifest::to_json() const {
  json j;
  j["version"] = version;
  j["schema"] = {{"jsonl", kSchemaVersion},
                 {"identity_csv", kSchemaVersion},
                 {"series_csv", kSchemaVersion}};
  j["config"] = config_echo;
  j["wall_clock_s"] = wall_clock_s;
  json files = json::array();
  for (std::size_t i = 0; i < this->files.size(); ++i)
    files.push_back({{"path", this->files[i]}, {"fnv1a64", hashes[i]}});
  j["files"] = files;
  json checks_j = json::array();
  for (const auto& c : checks)
    checks_j.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"bound", c.bound}});
  j["checks"] = checks_j;
  j["warnings"] = warnings;
  j["pass"] = rollup;
  return j;
}

}  // namespace dp
