#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>

namespace dp {

/// Uniform periodic grid on [-length/2, length/2), n a power of two >= 16.
/// Immutable after construction; Fields hold shared references.
class Grid {
 public:
  Grid(double length, Eigen::Index n);

  double length() const { return length_; }
  Eigen::Index n() const { return n_; }
  double spacing() const { return spacing_; }
  const Eigen::ArrayXd& nodes() const { return nodes_; }
  double node(Eigen::Index j) const { return nodes_[j]; }

  /// Smallest-magnitude periodic image of x - x0.
  double min_image(double x, double x0) const;

  /// Index of the node nearest to x (periodic).
  Eigen::Index nearest_index(double x) const;

  bool same_as(const Grid& other) const {
    return n_ == other.n_ && length_ == other.length_;
  }

 private:
  double length_;
  Eigen::Index n_;
  double spacing_;
  Eigen::ArrayXd nodes_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(double length, Eigen::Index n);

/// Real-valued samples on a Grid. Values are an Eigen array so the usual
/// coefficient-wise expressions apply directly.
struct Field {
  GridPtr grid;
  Eigen::ArrayXd values;

  Field() = default;
  Field(GridPtr g, Eigen::ArrayXd v);
  explicit Field(GridPtr g);  // zero field

  Eigen::Index n() const { return grid->n(); }
  double max_abs() const { return values.size() ? values.abs().maxCoeff() : 0.0; }
  bool all_finite() const { return values.allFinite(); }
  void require_finite(const char* what) const;
};

Field zero_field(const GridPtr& g);

/// Builds a field by sampling f at the nodes.
template <typename F>
Field sample(const GridPtr& g, F&& f) {
  Field out(g);
  for (Eigen::Index j = 0; j < g->n(); ++j) out.values[j] = f(g->node(j));
  return out;
}

/// Trapezoid rule over the periodic box: spacing * sum(values).
/// Spectrally accurate for smooth periodic data.
double quadrature(const Field& f);

/// Trapezoid rule restricted to nodes with x >= left (clamped window).
double quadrature_from(const Field& f, double left);

// --- serialization ------------------------------------------------------

/// Two-column text: x value, one node per line.
void write_text(const Field& f, const std::string& path);

/// Compact binary record: header (double length, uint64 n, little-endian),
/// payload n doubles. Round-trips bit-exactly.
void write_binary(const Field& f, const std::string& path);
Field read_binary(const std::string& path);

}  // namespace dp
