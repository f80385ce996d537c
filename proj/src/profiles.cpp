#include "dp/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dp/mollifier.hpp"
#include "dp/warnings.hpp"

namespace dp {

namespace {

void require_moll_resolved(int moll_n, const Grid& g) {
  if (moll_n < 1) throw std::invalid_argument("mollification index must be >= 1");
  double w = 1.0 / static_cast<double>(moll_n);
  if (g.spacing() > 0.5 * w)
    throw std::invalid_argument("grid spacing exceeds half the mollifier width");
  if (g.spacing() > 0.25 * w)
    warnings::emit("mollifier resolved by fewer than 8 nodes across its support");
}

}  // namespace

void TrainSpec::validate() const {
  if (velocities.empty()) throw std::invalid_argument("train: empty velocities");
  if (velocities.size() != shifts.size())
    throw std::invalid_argument("train: velocities/shifts size mismatch");
  for (std::size_t i = 0; i < velocities.size(); ++i) {
    if (velocities[i] == 0.0) throw std::invalid_argument("train: zero speed not allowed");
    if (i > 0 && velocities[i] <= velocities[i - 1])
      throw std::invalid_argument("train: velocities must be strictly increasing");
  }
  for (std::size_t i = 1; i < shifts.size(); ++i) {
    if (shifts[i] - shifts[i - 1] < separation) {
      std::ostringstream os;
      os << "train: shift gap " << shifts[i] - shifts[i - 1] << " below separation "
         << separation;
      throw std::invalid_argument(os.str());
    }
  }
}

int TrainSpec::n_negative() const {
  return static_cast<int>(std::count_if(velocities.begin(), velocities.end(),
                                        [](double c) { return c < 0.0; }));
}

double TrainSpec::norm1() const {
  double s = 0.0;
  for (double c : velocities) s += std::abs(c);
  return s;
}

double TrainSpec::sigma() const {
  // consecutive gaps with the notational c_0 = 0 inserted at the sign change
  double best = std::numeric_limits<double>::infinity();
  double prev = velocities.front();
  bool zero_inserted = prev > 0.0;
  if (zero_inserted) best = prev;  // gap c_1 - c_0
  for (std::size_t i = 1; i < velocities.size(); ++i) {
    double cur = velocities[i];
    if (!zero_inserted && prev < 0.0 && cur > 0.0) {
      best = std::min({best, -prev, cur});
      zero_inserted = true;
    } else {
      best = std::min(best, cur - prev);
    }
    prev = cur;
  }
  if (!zero_inserted) best = std::min(best, -prev);  // all negative: gap to c_0
  return best;
}

double TrainSpec::min_abs_edge_speed() const {
  double pos = std::numeric_limits<double>::infinity();
  double neg = std::numeric_limits<double>::infinity();
  for (double c : velocities) {
    if (c > 0.0) pos = std::min(pos, c);
    else neg = std::min(neg, -c);
  }
  return std::min(pos, neg);
}

Field peakon(double c, double x0, const GridPtr& grid) {
  if (c == 0.0) throw std::invalid_argument("peakon: c must be nonzero");
  return sample(grid, [&](double x) { return c * std::exp(-std::abs(grid->min_image(x, x0))); });
}

Field smooth_peakon(double c, double x0, const GridPtr& grid) {
  if (c == 0.0) throw std::invalid_argument("smooth_peakon: c must be nonzero");
  return sample(grid, [&](double x) {
    double d = std::abs(grid->min_image(x, x0));
    return (c / 3.0) * std::exp(-d) - (c / 6.0) * std::exp(-2.0 * d);
  });
}

Field shock_peakon(double k, double t, const GridPtr& grid) {
  if (!(k > 0.0)) throw std::invalid_argument("shock_peakon: k must be positive");
  if (t < 0.0) throw std::invalid_argument("shock_peakon: t must be nonnegative");
  double amp = -1.0 / (t + k);
  return sample(grid, [&](double x) {
    double d = grid->min_image(x, 0.0);
    double sgn = (d > 0.0) - (d < 0.0);
    return amp * sgn * std::exp(-std::abs(d));
  });
}

Field train(const TrainSpec& spec, const GridPtr& grid) {
  spec.validate();
  double span = spec.shifts.back() - spec.shifts.front();
  if (!(grid->length() > span + 16.0))
    throw std::invalid_argument("train: grid length must exceed the shift span + 16");
  Field out(grid);
  for (std::size_t j = 0; j < spec.size(); ++j)
    out.values += peakon(spec.velocities[j], spec.shifts[j], grid).values;
  boundary_leak_ratio(out);
  return out;
}

Field mollified_peakon(double c, double x0, int moll_n, const GridPtr& grid) {
  if (c == 0.0) throw std::invalid_argument("mollified_peakon: c must be nonzero");
  require_moll_resolved(moll_n, *grid);
  const double w = 1.0 / static_cast<double>(moll_n);
  const double center = x0 + (c > 0.0 ? w : -w);
  const double len = grid->length();
  Field out(grid);
  for (Eigen::Index j = 0; j < grid->n(); ++j) {
    double z = grid->min_image(grid->node(j), center);
    double v = mollifier::exp_kernel_conv(z, w, 1.0);
    // nearest periodic images (closed-form region by construction)
    v += mollifier::exp_kernel_conv(z + len, w, 1.0) + mollifier::exp_kernel_conv(z - len, w, 1.0);
    out.values[j] = c * v;
  }
  return out;
}

Field mollified_smooth_peakon(double c, double x0, int moll_n, const GridPtr& grid) {
  if (c == 0.0) throw std::invalid_argument("mollified_smooth_peakon: c must be nonzero");
  require_moll_resolved(moll_n, *grid);
  const double w = 1.0 / static_cast<double>(moll_n);
  const double center = x0 + (c > 0.0 ? w : -w);
  Field out(grid);
  for (Eigen::Index j = 0; j < grid->n(); ++j) {
    double z = grid->min_image(grid->node(j), center);
    out.values[j] = c * ((1.0 / 3.0) * mollifier::exp_kernel_conv(z, w, 1.0) -
                         (1.0 / 6.0) * mollifier::exp_kernel_conv(z, w, 2.0));
  }
  return out;
}

Field mollified_train(const TrainSpec& spec, int moll_n, const GridPtr& grid) {
  spec.validate();
  Field out(grid);
  for (std::size_t j = 0; j < spec.size(); ++j)
    out.values += mollified_peakon(spec.velocities[j], spec.shifts[j], moll_n, grid).values;
  boundary_leak_ratio(out);
  return out;
}

MollifiedData mollified_from_momentum(const Field& y_neg, const Field& y_pos, int moll_n) {
  if (!y_neg.grid->same_as(*y_pos.grid))
    throw std::invalid_argument("mollified_from_momentum: grid mismatch");
  require_moll_resolved(moll_n, *y_neg.grid);
  const double scale = std::max(y_neg.max_abs(), y_pos.max_abs());
  const double tol = 1e-10 * std::max(scale, 1.0);
  if ((y_neg.values > tol).any())
    throw std::invalid_argument("mollified_from_momentum: y_neg has positive part");
  if ((y_pos.values < -tol).any())
    throw std::invalid_argument("mollified_from_momentum: y_pos has negative part");
  // support ordering: last y_neg-support node must sit left of the first
  // y_pos-support node
  Eigen::Index last_neg = -1, first_pos = y_pos.n();
  for (Eigen::Index j = 0; j < y_neg.n(); ++j)
    if (y_neg.values[j] < -tol) last_neg = j;
  for (Eigen::Index j = y_pos.n() - 1; j >= 0; --j)
    if (y_pos.values[j] > tol) first_pos = j;
  if (last_neg >= 0 && first_pos < y_pos.n() && last_neg >= first_pos)
    throw std::invalid_argument("mollified_from_momentum: supports interleave");

  const double w = 1.0 / static_cast<double>(moll_n);
  auto shift_mollify = [&](const Field& part, double shift) {
    Spectrum s = analyze(part);
    const std::size_t half = s.bins.size() - 1;
    for (std::size_t m = 0; m <= half; ++m) {
      double k = s.wavenumber(m);
      cplx mult = mollifier::fourier(k * w) * std::polar(1.0, k * shift);
      s.bins[m] *= mult;
    }
    s.bins[half] = cplx(s.bins[half].real(), 0.0);
    return s;
  };
  Spectrum yn = shift_mollify(y_neg, +w);  // f(x + w): shift left
  Spectrum yp = shift_mollify(y_pos, -w);
  for (std::size_t m = 0; m < yn.bins.size(); ++m) yn.bins[m] += yp.bins[m];
  MollifiedData out;
  out.y = synthesize(yn);
  invert_helmholtz_inplace(yn, 1.0);
  out.u = synthesize(yn);
  const auto& g = *y_neg.grid;
  double x0 = g.node(0);
  if (last_neg >= 0) x0 = g.node(last_neg);
  out.x0 = x0;
  return out;
}

std::optional<SignStructure> check_hypothesis1(const Field& y, double tol,
                                               SignViolation* violation) {
  y.require_finite("check_hypothesis1");
  if (tol < 0.0) tol = 1e-10 * y.max_abs();
  const auto& g = *y.grid;
  Eigen::Index last_neg = -1;
  Eigen::Index first_pos = -1;
  for (Eigen::Index j = 0; j < y.n(); ++j) {
    if (y.values[j] < -tol) last_neg = j;
    if (first_pos < 0 && y.values[j] > tol) first_pos = j;
  }
  if (last_neg >= 0 && first_pos >= 0 && first_pos < last_neg) {
    if (violation) {
      violation->positive_node = g.node(first_pos);
      violation->negative_node = g.node(last_neg);
    }
    return std::nullopt;
  }
  SignStructure s;
  s.tol = tol;
  s.x0 = (last_neg >= 0) ? g.node(last_neg) : g.node(0);
  return s;
}

Field momentum_bump(double x0, double w, const GridPtr& grid) {
  const double z = mollifier::normalization();
  return sample(grid, [&](double x) {
    double d = grid->min_image(x, x0);
    return mollifier::bump(d / w) / (w * z);
  });
}

Field velocity_of_momentum_bump(double x0, double w, const GridPtr& grid) {
  Field out(grid);
  for (Eigen::Index j = 0; j < grid->n(); ++j) {
    double d = grid->min_image(grid->node(j), x0);
    out.values[j] = 0.5 * mollifier::exp_kernel_conv(d, w, 1.0);
  }
  return out;
}

Field band_limited_peakon(double c, double x0, const GridPtr& grid) {
  Spectrum s;
  s.grid = grid;
  s.bins.assign(static_cast<std::size_t>(grid->n() / 2 + 1), cplx(0.0, 0.0));
  const double len = grid->length();
  for (std::size_t m = 0; m < s.bins.size(); ++m) {
    double k = s.wavenumber(m);
    s.set_line_coef(m, (2.0 * c / len) * std::polar(1.0, -k * x0) / (1.0 + k * k));
  }
  s.bins.back() = cplx(s.bins.back().real(), 0.0);
  return synthesize(s);
}

double boundary_leak_ratio(const Field& u) {
  double peak = u.max_abs();
  if (peak == 0.0) return 0.0;
  double edge = std::abs(u.values[0]);
  double ratio = edge / peak;
  if (ratio > 1e-8) {
    std::ostringstream os;
    os << "field touches the periodic boundary: |u(edge)|/max|u| = " << ratio;
    warnings::emit(os.str());
  }
  return ratio;
}

}  // namespace dp
