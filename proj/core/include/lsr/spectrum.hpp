#pragma once

#include <memory>
#include <vector>

#include <Eigen/SparseCore>
#include <nlohmann/json_fwd.hpp>

#include "lsr/field.hpp"
#include "lsr/ground_state.hpp"

namespace lsr {

/// Top of the spectrum of the single-bump linearization at ε = 0.
struct EigenReport {
  /// Descending.
  std::vector<double> eigenvalues;
  /// Orthonormal in h^N Σ (u·u' + v·v') over the nodes.
  std::vector<FieldPair> eigenfields;
  /// ||Aη - λη||_2 / ||η||_2 per pair.
  std::vector<double> residuals;
  /// Eigenvalues within `kernel_threshold` of zero.
  int kernel_dimension = 0;
  double kernel_threshold = 0.0;
  /// Count of eigenvalues above `kernel_threshold`.
  int positive_count = 0;
  /// Distance from the zero cluster to the nearest eigenvalue outside it.
  double spectral_gap = 0.0;
};

/// Coupled linearization around one bump at the origin, unknowns interleaved,
/// with zero ghosts.
Eigen::SparseMatrix<double> single_bump_operator(double beta,
                                                 std::shared_ptr<const GroundState> gs,
                                                 const Grid& grid);

/// Top-k eigenpairs of the coupled single-bump linearization
///
///     (η1, η2) -> (Δη1 - η1 + 3U²η1 + βη2,  Δη2 - η2 + 3U²η2 + βη1).
///
/// U = V, so the operator splits into the modes (η, η) with Δ + β - 1 + 3U²
/// and (η, -η) with Δ - β - 1 + 3U². Each is solved by shift-invert Lanczos.
/// Zero ghosts are always used here so the operator stays symmetric.
EigenReport linearized_spectrum(double beta, std::shared_ptr<const GroundState> gs,
                                const Grid& grid, int k);

struct NondegeneracyReport {
  double beta = 0.0;
  int dim = 1;
  int kernel_dimension = 0;
  double kernel_threshold = 0.0;
  /// Largest principal angle between the near kernel and the translation span.
  double max_angle = 0.0;
  std::vector<double> angles;
  std::vector<double> near_zero;
  bool passed = false;
};

/// Near-kernel dimension and its principal angles to span{∂U/∂x_j, ∂V/∂x_j}.
/// Passes iff the dimension equals N and every angle is below 1e-2.
NondegeneracyReport nondegeneracy_check(double beta, std::shared_ptr<const GroundState> gs,
                                        const Grid& grid);

struct DegeneracySweep {
  std::vector<double> betas;
  std::vector<int> kernel_dims;
  /// Smallest |λ| outside the translation cluster, per β.
  std::vector<double> nearest_extra;
  /// Bracket (lo, hi) of the first β < 0 (scanning down from 0) where the
  /// near kernel grows; both NaN when none was seen.
  double negative_lo;
  double negative_hi;
  /// Same for β > 0 scanning up.
  double positive_lo;
  double positive_hi;
};

DegeneracySweep degeneracy_sweep(const std::vector<double>& betas,
                                 std::shared_ptr<const GroundState> gs, const Grid& grid);

/// {"eigenvalues": [...], "kernel_dim": n, "gap": g}
nlohmann::json to_json(const EigenReport& r);

}  // namespace lsr
