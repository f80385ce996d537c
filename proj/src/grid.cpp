#include "dp/grid.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace dp {

namespace {
bool is_pow2(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid::Grid(double length, Eigen::Index n) : length_(length), n_(n) {
  if (!(length > 0.0)) throw std::invalid_argument("grid: nonpositive length");
  if (!is_pow2(n) || n < 16) throw std::invalid_argument("grid: n must be a power of two >= 16");
  spacing_ = length_ / static_cast<double>(n_);
  nodes_.resize(n_);
  for (Eigen::Index j = 0; j < n_; ++j)
    nodes_[j] = -0.5 * length_ + spacing_ * static_cast<double>(j);
}

double Grid::min_image(double x, double x0) const {
  double d = x - x0;
  d -= length_ * std::round(d / length_);
  return d;
}

Eigen::Index Grid::nearest_index(double x) const {
  double t = (x + 0.5 * length_) / spacing_;
  auto j = static_cast<Eigen::Index>(std::llround(t));
  j %= n_;
  if (j < 0) j += n_;
  return j;
}

GridPtr make_grid(double length, Eigen::Index n) {
  return std::make_shared<const Grid>(length, n);
}

Field::Field(GridPtr g, Eigen::ArrayXd v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->n()) throw std::invalid_argument("field: values length != grid.n");
}

Field::Field(GridPtr g) : grid(std::move(g)) {
  values = Eigen::ArrayXd::Zero(grid->n());
}

void Field::require_finite(const char* what) const {
  if (!all_finite()) throw std::runtime_error(std::string("non-finite field in ") + what);
}

Field zero_field(const GridPtr& g) { return Field(g); }

double quadrature(const Field& f) { return f.grid->spacing() * f.values.sum(); }

double quadrature_from(const Field& f, double left) {
  const auto& g = *f.grid;
  double acc = 0.0;
  for (Eigen::Index j = 0; j < g.n(); ++j)
    if (g.node(j) >= left) acc += f.values[j];
  return g.spacing() * acc;
}

void write_text(const Field& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os.precision(17);
  for (Eigen::Index j = 0; j < f.n(); ++j)
    os << f.grid->node(j) << ' ' << f.values[j] << '\n';
}

void write_binary(const Field& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  double length = f.grid->length();
  std::uint64_t n = static_cast<std::uint64_t>(f.n());
  os.write(reinterpret_cast<const char*>(&length), sizeof(length));
  os.write(reinterpret_cast<const char*>(&n), sizeof(n));
  os.write(reinterpret_cast<const char*>(f.values.data()),
           static_cast<std::streamsize>(sizeof(double) * f.values.size()));
}

Field read_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  double length = 0.0;
  std::uint64_t n = 0;
  is.read(reinterpret_cast<char*>(&length), sizeof(length));
  is.read(reinterpret_cast<char*>(&n), sizeof(n));
  if (!is) throw std::runtime_error("truncated field record in " + path);
  Field f(make_grid(length, static_cast<Eigen::Index>(n)));
  is.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(sizeof(double) * n));
  if (!is) throw std::runtime_error("truncated field payload in " + path);
  return f;
}

}  // namespace dp
