#include "lsr/grid.hpp"

#include <nlohmann/json.hpp>

#include <string>

#include "lsr/error.hpp"

namespace lsr {

namespace {

void check_common(int dim, double half_width, int order) {
  if (dim < 1 || dim > 3) throw DomainError("grid dimension must be 1, 2 or 3");
  if (!(half_width > 0.0)) throw DomainError("grid half width must be positive");
  if (order != 2 && order != 4 && order != 6)
    throw DomainError("stencil order must be 2, 4 or 6, got " + std::to_string(order));
}

}  // namespace

Grid Grid::make(int dim, double half_width, double spacing, int stencil_order) {
  check_common(dim, half_width, stencil_order);
  if (!(spacing > 0.0)) throw DomainError("grid spacing must be positive");
  const auto cells_per_side = static_cast<int>(std::ceil(half_width / spacing - 1e-9));
  return with_nodes(dim, half_width, 2 * cells_per_side + 1, stencil_order);
}

Grid Grid::with_nodes(int dim, double half_width, int nodes_per_axis, int stencil_order) {
  check_common(dim, half_width, stencil_order);
  if (nodes_per_axis < 3 || nodes_per_axis % 2 == 0)
    throw DomainError("node count per axis must be odd and at least 3");
  Grid g;
  g.dim = dim;
  g.half_width = half_width;
  g.nodes_per_axis = nodes_per_axis;
  g.spacing = 2.0 * half_width / (nodes_per_axis - 1);
  g.stencil_order = stencil_order;
  return g;
}

std::size_t Grid::size() const {
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(nodes_per_axis);
  return n;
}

std::size_t Grid::stride(int axis) const {
  std::size_t s = 1;
  for (int a = 0; a < axis; ++a) s *= static_cast<std::size_t>(nodes_per_axis);
  return s;
}

std::array<int, 3> Grid::multi_index(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  const auto n = static_cast<std::size_t>(nodes_per_axis);
  for (int a = 0; a < dim; ++a) {
    idx[a] = static_cast<int>(flat % n);
    flat /= n;
  }
  return idx;
}

Point Grid::point(std::size_t flat) const {
  const auto idx = multi_index(flat);
  Point p{};
  for (int a = 0; a < dim; ++a) p[a] = coordinate(idx[a]);
  return p;
}

double Grid::cell_volume() const { return std::pow(spacing, dim); }

bool Grid::on_boundary(std::size_t flat) const {
  const auto idx = multi_index(flat);
  for (int a = 0; a < dim; ++a)
    if (idx[a] == 0 || idx[a] == nodes_per_axis - 1) return true;
  return false;
}

ScalarField quadrature_weights(const Grid& grid) {
  ScalarField w(static_cast<Eigen::Index>(grid.size()));
  const double vol = grid.cell_volume();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.multi_index(i);
    double wi = vol;
    for (int a = 0; a < grid.dim; ++a)
      if (idx[a] == 0 || idx[a] == grid.nodes_per_axis - 1) wi *= 0.5;
    w[static_cast<Eigen::Index>(i)] = wi;
  }
  return w;
}

double pairwise_sum(const double* values, std::size_t count) {
  if (count <= 64) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += values[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

nlohmann::json grid_metadata(const Grid& grid) {
  return {{"dim", grid.dim},
          {"half_width", grid.half_width},
          {"spacing", grid.spacing},
          {"nodes_per_axis", grid.nodes_per_axis},
          {"stencil_order", grid.stencil_order},
          {"boundary_decay", grid.boundary_decay}};
}

Grid grid_from_metadata(const nlohmann::json& j) {
  const int dim = j.at("dim").get<int>();
  const double L = j.at("half_width").get<double>();
  const int order = j.value("stencil_order", 6);
  Grid g = j.contains("nodes_per_axis")
               ? Grid::with_nodes(dim, L, j.at("nodes_per_axis").get<int>(), order)
               : Grid::make(dim, L, j.at("spacing").get<double>(), order);
  g.boundary_decay = j.value("boundary_decay", 0.0);
  if (!(g.boundary_decay >= 0.0)) throw DomainError("boundary_decay must be nonnegative");
  return g;
}

}  // namespace lsr
