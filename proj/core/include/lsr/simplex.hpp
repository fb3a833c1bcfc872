#pragma once

#include <functional>
#include <limits>

#include <Eigen/Core>

namespace lsr {

struct SimplexOptions {
  /// Edge length of the initial simplex.
  double initial_step = 1.0;
  /// Stop when every vertex lies within `xtol` (max-norm) of the best one...
  double xtol = 1e-6;
  /// ...and the spread of values is below `ftol`.
  double ftol = 1e-13;
  int max_evaluations = 4000;
};

struct SimplexResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead search for a maximum of `f` starting from `x0`. Uses the
/// dimension-adapted coefficients of Gao and Han.
SimplexResult maximize_simplex(const std::function<double(const Eigen::VectorXd&)>& f,
                               const Eigen::VectorXd& x0, const SimplexOptions& options = {});

}  // namespace lsr
