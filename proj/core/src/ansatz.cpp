#include "lsr/ansatz.hpp"

#include <sstream>

#include "lsr/error.hpp"

namespace lsr {

namespace {

void check_truncation(const Configuration& c, double gamma, const Grid& grid) {
  const double needed = required_half_width(c, gamma);
  if (grid.half_width + 1e-9 < needed) {
    std::ostringstream msg;
    msg << "spike center too close to the box boundary: need half width >= " << needed
        << ", grid has " << grid.half_width;
    throw TruncationError(msg.str(), needed);
  }
}

}  // namespace

FieldPair assemble_ansatz(const Configuration& c, const BlockProfile& block, const Grid& grid) {
  if (c.dim != grid.dim) throw GridMismatch("configuration and grid dimensions differ");
  check_truncation(c, block.gamma(), grid);
  FieldPair f = FieldPair::zeros(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.point(i);
    double s = 0.0;
    for (const auto& P : c.centers) s += block.at(x, P);
    f.u[static_cast<Eigen::Index>(i)] = s;
  }
  f.v = f.u;
  return f;
}

CutoffRadii cutoff_radii(double mu, double gamma) {
  if (!(mu > 2.0)) throw DomainError("cutoff needs mu > 2");
  return {(mu - 1.0) / (2.0 * gamma), mu * mu / (2.0 * gamma * (mu + 1.0))};
}

double cutoff_zeta(const Point& x, const Point& center, double mu, double gamma) {
  const auto [r_in, r_out] = cutoff_radii(mu, gamma);
  const double r = distance(x, center);
  if (r <= r_in) return 1.0;
  if (r >= r_out) return 0.0;
  const double t = (r - r_in) / (r_out - r_in);
  return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

std::vector<FieldPair> translation_modes(const Configuration& c, const BlockProfile& block,
                                         const Grid& grid) {
  std::vector<FieldPair> out;
  for (const auto& P : c.centers)
    for (int k = 0; k < c.dim; ++k) {
      FieldPair d = FieldPair::zeros(grid);
      for (std::size_t i = 0; i < grid.size(); ++i)
        d.u[static_cast<Eigen::Index>(i)] = block.partial(grid.point(i), P, k);
      d.v = d.u;
      out.push_back(std::move(d));
    }
  return out;
}

std::vector<FieldPair> kernel_basis(const Configuration& c, const BlockProfile& block,
                                    const Grid& grid) {
  if (c.dim != grid.dim) throw GridMismatch("configuration and grid dimensions differ");
  const double r_out = cutoff_radii(c.mu, block.gamma()).outer;
  std::vector<FieldPair> out;
  for (const auto& P : c.centers)
    for (int k = 0; k < c.dim; ++k) {
      FieldPair d = FieldPair::zeros(grid);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const Point x = grid.point(i);
        if (distance(x, P) >= r_out) continue;
        d.u[static_cast<Eigen::Index>(i)] =
            block.partial(x, P, k) * cutoff_zeta(x, P, c.mu, block.gamma());
      }
      d.v = d.u;
      out.push_back(std::move(d));
    }
  return out;
}

}  // namespace lsr
