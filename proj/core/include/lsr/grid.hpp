#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

namespace lsr {

/// A point of R^N stored in three slots; unused trailing coordinates are 0.
using Point = std::array<double, 3>;

inline double distance(const Point& a, const Point& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double norm(const Point& a) { return distance(a, Point{}); }

/// Nodal values of a scalar field, flattened with axis 0 fastest.
using ScalarField = Eigen::VectorXd;

/// Uniform tensor grid on the box [-L, L]^N. The node count per axis is odd
/// so the origin is always a node.
///
/// Outside the box the stencil sees ghost values u_b e^{-κ m h}, where u_b is
/// the nearest boundary value, m the number of steps past the face and κ =
/// `boundary_decay`. κ = 0 gives zero ghosts (homogeneous Dirichlet).
struct Grid {
  int dim = 1;
  double half_width = 0.0;
  double spacing = 0.0;
  int nodes_per_axis = 1;
  /// Accuracy order of the central Laplacian stencil: 2, 4 or 6.
  int stencil_order = 6;
  /// Decay rate κ of the ghost extension; 0 for zero ghosts.
  double boundary_decay = 0.0;

  /// Builds a grid whose spacing is the largest value not exceeding
  /// `spacing` that divides `half_width` evenly.
  static Grid make(int dim, double half_width, double spacing, int stencil_order = 6);
  /// Builds a grid with exactly `nodes_per_axis` (odd) nodes per axis.
  static Grid with_nodes(int dim, double half_width, int nodes_per_axis, int stencil_order = 6);

  std::size_t size() const;
  std::size_t stride(int axis) const;
  double coordinate(int index) const { return -half_width + index * spacing; }
  std::array<int, 3> multi_index(std::size_t flat) const;
  Point point(std::size_t flat) const;
  double cell_volume() const;
  /// True when the node lies on the box boundary along some axis.
  bool on_boundary(std::size_t flat) const;
  Grid with_boundary_decay(double kappa) const {
    Grid g = *this;
    g.boundary_decay = kappa;
    return g;
  }

  bool operator==(const Grid&) const = default;
};

/// Trapezoidal quadrature weights (product rule), including the cell volume.
ScalarField quadrature_weights(const Grid& grid);

/// Deterministic pairwise summation.
double pairwise_sum(const double* values, std::size_t count);

nlohmann::json grid_metadata(const Grid& grid);
Grid grid_from_metadata(const nlohmann::json& j);

}  // namespace lsr
