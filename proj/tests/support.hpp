#pragma once

#include <cmath>
#include <memory>
#include <random>

#include "lsr/ground_state.hpp"
#include "lsr/problem.hpp"

namespace lsr::test {

/// Ground states are expensive enough to share between test cases.
inline std::shared_ptr<const GroundState> ground(int dim) {
  static std::shared_ptr<const GroundState> cache[4];
  if (!cache[dim]) cache[dim] = std::make_shared<const GroundState>(solve_ground_state(dim, 1e-6));
  return cache[dim];
}

inline Problem problem_1d(double beta, double epsilon, double half_width, double spacing,
                          PotentialSpec p = {}, PotentialSpec q = {}) {
  const SystemParams params = SystemParams::make(beta, epsilon, p, q);
  return {ground(1), params, reduction_grid(1, half_width, spacing, params.gamma)};
}

/// Random smooth field that vanishes within `margin` of the box boundary.
inline ScalarField bump_noise(const Grid& g, std::uint64_t seed, double margin = 2.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double a[4][3];
  for (auto& row : a)
    for (auto& x : row) x = unit(rng);
  ScalarField f(static_cast<Eigen::Index>(g.size()));
  const double L = g.half_width - margin;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point p = g.point(i);
    double value = 1.0, r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) {
      const double x = p[static_cast<std::size_t>(d)];
      r2 += x * x;
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += a[k][d] * std::cos((k + 1) * x * 0.7 + k);
      value *= s;
    }
    const double t = r2 / (L * L);
    f[static_cast<Eigen::Index>(i)] = t < 1.0 ? value * std::pow(1.0 - t, 4) : 0.0;
  }
  return f;
}

}  // namespace lsr::test
