#include "lsr/linsolve.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SparseLU>

#include "lsr/ansatz.hpp"
#include "lsr/error.hpp"

namespace lsr {

namespace {

constexpr double kMaxCondition = 1e13;

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace

struct ProjectedSolver::Factorization {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

FieldPair apply_L(const FieldPair& f, const SystemParams& p, const FieldPair& ansatz) {
  if (!(f.grid == ansatz.grid)) throw GridMismatch("apply_L: field and ansatz grids differ");
  const Grid& g = f.grid;
  const ScalarField P = sample_potential(p.potential_p, g, p.gamma);
  const ScalarField Q = sample_potential(p.potential_q, g, p.gamma);
  FieldPair out{g, laplacian(f.u, g), laplacian(f.v, g)};
  for (Eigen::Index i = 0; i < out.u.size(); ++i) {
    const double U = ansatz.u[i], V = ansatz.v[i];
    out.u[i] += (-(1.0 + p.epsilon * P[i]) + 3.0 * U * U) * f.u[i] + p.beta * f.v[i];
    out.v[i] += (-(1.0 + p.epsilon * Q[i]) + 3.0 * V * V) * f.v[i] + p.beta * f.u[i];
  }
  return out;
}

namespace {

std::vector<Eigen::Triplet<double>> linearized_triplets(const FieldPair& ansatz,
                                                        const SystemParams& p) {
  const Grid& g = ansatz.grid;
  const Eigen::SparseMatrix<double> lap = laplacian_matrix(g);
  const ScalarField P = sample_potential(p.potential_p, g, p.gamma);
  const ScalarField Q = sample_potential(p.potential_q, g, p.gamma);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * static_cast<std::size_t>(lap.nonZeros()) + 4 * g.size());
  for (int col = 0; col < lap.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(lap, col); it; ++it) {
      t.emplace_back(2 * it.row(), 2 * it.col(), it.value());
      t.emplace_back(2 * it.row() + 1, 2 * it.col() + 1, it.value());
    }
  for (Eigen::Index i = 0; i < ansatz.u.size(); ++i) {
    const double U = ansatz.u[i], V = ansatz.v[i];
    t.emplace_back(2 * i, 2 * i, -(1.0 + p.epsilon * P[i]) + 3.0 * U * U);
    t.emplace_back(2 * i + 1, 2 * i + 1, -(1.0 + p.epsilon * Q[i]) + 3.0 * V * V);
    if (p.beta != 0.0) {
      t.emplace_back(2 * i, 2 * i + 1, p.beta);
      t.emplace_back(2 * i + 1, 2 * i, p.beta);
    }
  }
  return t;
}

}  // namespace

Eigen::SparseMatrix<double> linearized_matrix(const FieldPair& ansatz, const SystemParams& p) {
  const auto n = 2 * idx(ansatz.grid.size());
  const auto t = linearized_triplets(ansatz, p);
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

ProjectedSolver::ProjectedSolver(const FieldPair& ansatz, std::vector<FieldPair> basis,
                                 const SystemParams& p, ScalarField star_weight)
    : grid_(ansatz.grid),
      basis_(std::move(basis)),
      weight_(std::move(star_weight)),
      lu_(std::make_unique<Factorization>()) {
  const auto n = 2 * idx(grid_.size());
  const auto K = idx(basis_.size());
  auto t = linearized_triplets(ansatz, p);
  for (Eigen::Index k = 0; k < K; ++k) {
    const FieldPair& d = basis_[static_cast<std::size_t>(k)];
    if (!(d.grid == grid_)) throw GridMismatch("basis and ansatz grids differ");
    for (Eigen::Index i = 0; i < d.u.size(); ++i) {
      if (d.u[i] != 0.0) {
        t.emplace_back(2 * i, n + k, -d.u[i]);
        t.emplace_back(n + k, 2 * i, -d.u[i]);
      }
      if (d.v[i] != 0.0) {
        t.emplace_back(2 * i + 1, n + k, -d.v[i]);
        t.emplace_back(n + k, 2 * i + 1, -d.v[i]);
      }
    }
  }
  matrix_.resize(n + K, n + K);
  matrix_.setFromTriplets(t.begin(), t.end());
  matrix_.makeCompressed();

  lu_->lu.analyzePattern(matrix_);
  lu_->lu.factorize(matrix_);
  if (lu_->lu.info() != Eigen::Success)
    throw SingularSystem("saddle system factorization failed: " + lu_->lu.lastErrorMessage(),
                         std::numeric_limits<double>::infinity());

  // Hager's estimate of ||K^{-1}||_1.
  const auto size = matrix_.rows();
  double norm1 = 0.0;
  for (int col = 0; col < matrix_.outerSize(); ++col) {
    double s = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix_, col); it; ++it)
      s += std::abs(it.value());
    norm1 = std::max(norm1, s);
  }
  Eigen::VectorXd x = Eigen::VectorXd::Constant(size, 1.0 / static_cast<double>(size));
  double inv_norm = 0.0;
  for (int iter = 0; iter < 5; ++iter) {
    const Eigen::VectorXd y = lu_->lu.solve(x);
    inv_norm = y.lpNorm<1>();
    const Eigen::VectorXd xi = y.unaryExpr([](double a) { return a >= 0.0 ? 1.0 : -1.0; });
    const Eigen::VectorXd z = lu_->lu.transpose().solve(xi);
    Eigen::Index j = 0;
    const double zmax = z.cwiseAbs().maxCoeff(&j);
    if (zmax <= z.dot(x)) break;
    x.setZero();
    x[j] = 1.0;
  }
  condition_ = norm1 * inv_norm;
  if (!std::isfinite(condition_) || condition_ > kMaxCondition) {
    std::ostringstream msg;
    msg << "saddle system is ill-conditioned (condition estimate " << condition_
        << "); beta may be near a degenerate value or the grid too coarse";
    throw SingularSystem(msg.str(), condition_);
  }
}

ProjectedSolver::~ProjectedSolver() = default;
ProjectedSolver::ProjectedSolver(ProjectedSolver&&) noexcept = default;
ProjectedSolver& ProjectedSolver::operator=(ProjectedSolver&&) noexcept = default;

Eigen::VectorXd ProjectedSolver::bordered_apply(const Eigen::VectorXd& x) const {
  return matrix_ * x;
}

ProjectedSolution ProjectedSolver::solve(const FieldPair& h) const {
  if (!(h.grid == grid_)) throw GridMismatch("right-hand side lives on another grid");
  const auto n = idx(grid_.size());
  const auto K = idx(basis_.size());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * n + K);
  for (Eigen::Index i = 0; i < n; ++i) {
    rhs[2 * i] = h.u[i];
    rhs[2 * i + 1] = h.v[i];
  }
  Eigen::VectorXd sol = lu_->lu.solve(rhs);
  // One step of iterative refinement.
  const Eigen::VectorXd r = rhs - bordered_apply(sol);
  sol += lu_->lu.solve(r);

  ProjectedSolution out;
  out.correction = FieldPair::zeros(grid_);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.correction.u[i] = sol[2 * i];
    out.correction.v[i] = sol[2 * i + 1];
  }
  out.multipliers.resize(static_cast<std::size_t>(K));
  for (Eigen::Index k = 0; k < K; ++k) out.multipliers[static_cast<std::size_t>(k)] = sol[2 * n + k];

  const Eigen::VectorXd res = bordered_apply(sol) - rhs;
  out.residual = res.head(2 * n).cwiseAbs().maxCoeff();
  for (const auto& d : basis_)
    out.orthogonality = std::max(out.orthogonality, std::abs(inner(out.correction, d)));
  out.correction_star = star_norm(out.correction, weight_);
  out.rhs_star = star_norm(h, weight_);
  out.stability_ratio = out.rhs_star > 0.0 ? out.correction_star / out.rhs_star : 0.0;
  return out;
}

ProjectedSolution solve_projected(const FieldPair& h, const Configuration& c,
                                  const Problem& problem) {
  const auto validity = validate_configuration(c, problem.params.gamma);
  if (!validity.valid) {
    std::ostringstream msg;
    msg << "configuration violates the separation constraint (margin " << validity.margin << ")";
    throw ValidationError(msg.str());
  }
  const BlockProfile block = problem.block();
  const FieldPair ansatz = assemble_ansatz(c, block, problem.grid);
  ProjectedSolver solver(ansatz, kernel_basis(c, block, problem.grid), problem.params,
                         weight_F(problem.grid, c, problem.params.gamma, problem.nu));
  return solver.solve(h);
}

}  // namespace lsr
