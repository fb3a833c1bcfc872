#pragma once

#include <memory>
#include <vector>

#include <Eigen/SparseCore>

#include "lsr/configuration.hpp"
#include "lsr/field.hpp"
#include "lsr/problem.hpp"

namespace lsr {

/// L(φ,ψ) = (Δφ - (1+εP)φ + 3U²φ + βψ,  Δψ - (1+εQ)ψ + 3V²ψ + βφ) around the
/// ansatz (U, V).
FieldPair apply_L(const FieldPair& f, const SystemParams& p, const FieldPair& ansatz);

/// Sparse matrix of L with unknowns interleaved as (u_0, v_0, u_1, v_1, ...).
Eigen::SparseMatrix<double> linearized_matrix(const FieldPair& ansatz, const SystemParams& p);

struct ProjectedSolution {
  FieldPair correction;
  std::vector<double> multipliers;
  /// max-norm of L(φ,ψ) - h - Σ c_jk D_jk over the grid.
  double residual = 0.0;
  /// max_jk |⟨(φ,ψ), D_jk⟩|.
  double orthogonality = 0.0;
  double correction_star = 0.0;
  double rhs_star = 0.0;
  /// ||(φ,ψ)||_* / ||h||_*; the quantity the a-priori bound controls.
  double stability_ratio = 0.0;
};

/// Factorized saddle system
///
///     [  L   -D ] [ (φ,ψ) ]   [ h ]
///     [ -Dᵀ   0 ] [   c   ] = [ 0 ]
///
/// for one configuration. The factorization is reused across right-hand
/// sides, which is what the fixed-point iteration needs.
class ProjectedSolver {
 public:
  ProjectedSolver(const FieldPair& ansatz, std::vector<FieldPair> basis, const SystemParams& p,
                  ScalarField star_weight);
  ~ProjectedSolver();
  ProjectedSolver(ProjectedSolver&&) noexcept;
  ProjectedSolver& operator=(ProjectedSolver&&) noexcept;

  ProjectedSolution solve(const FieldPair& h) const;

  const std::vector<FieldPair>& basis() const noexcept { return basis_; }
  const ScalarField& star_weight() const noexcept { return weight_; }
  /// Hager 1-norm estimate of the condition number of the bordered matrix.
  double condition_estimate() const noexcept { return condition_; }

 private:
  struct Factorization;

  Eigen::VectorXd bordered_apply(const Eigen::VectorXd& x) const;

  Grid grid_;
  std::vector<FieldPair> basis_;
  ScalarField weight_;
  Eigen::SparseMatrix<double> matrix_;
  std::unique_ptr<Factorization> lu_;
  double condition_ = 0.0;
};

/// Solve the projected linear problem for configuration `c`: the ansatz and
/// the basis D_jk are assembled from `problem`.
ProjectedSolution solve_projected(const FieldPair& h, const Configuration& c,
                                  const Problem& problem);

}  // namespace lsr
