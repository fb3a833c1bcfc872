#include "lsr/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <nlohmann/json.hpp>

#include "lsr/ansatz.hpp"
#include "lsr/error.hpp"
#include "lsr/linsolve.hpp"

namespace lsr {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

struct RitzPair {
  double value;  // eigenvalue of A
  Eigen::VectorXd vector;
};

ScalarField bump_values(const BlockProfile& block, const Grid& grid) {
  ScalarField U(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i)
    U[static_cast<Eigen::Index>(i)] = block.value(norm(grid.point(i)));
  return U;
}

SpMat scalar_operator(const SpMat& lap, const ScalarField& U, double shift) {
  SpMat a = lap;
  for (Eigen::Index i = 0; i < U.size(); ++i) a.coeffRef(i, i) += -1.0 + 3.0 * U[i] * U[i] + shift;
  a.makeCompressed();
  return a;
}

void orthogonalize(Eigen::VectorXd& v, const std::vector<Eigen::VectorXd>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& q : basis) v -= q.dot(v) * q;
}

/// Top eigenpairs of the symmetric matrix `a` restricted to the orthogonal
/// complement of `locked`, by Lanczos on (σ - a)^{-1} with full
/// reorthogonalization. Returns converged pairs only, contiguous from the top.
std::vector<RitzPair> lanczos_top(const SpMat& a, const Eigen::SimplicialLLT<SpMat>& llt,
                                  const std::vector<Eigen::VectorXd>& locked, int wanted,
                                  std::uint64_t seed) {
  const Eigen::Index n = a.rows();
  const int free_dim = static_cast<int>(n) - static_cast<int>(locked.size());
  if (free_dim <= 0) return {};
  int steps = std::min(free_dim, std::max(4 * wanted, 60));
  const int max_steps = std::min(free_dim, 400);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd start(n);
  for (Eigen::Index i = 0; i < n; ++i) start[i] = normal(rng);

  for (;;) {
    std::vector<Eigen::VectorXd> q;
    q.reserve(static_cast<std::size_t>(steps) + 1);
    Eigen::VectorXd v = start;
    orthogonalize(v, locked);
    v.normalize();
    q.push_back(v);
    std::vector<double> alpha, beta;
    double beta_last = 0.0;
    for (int j = 0; j < steps; ++j) {
      Eigen::VectorXd w = llt.solve(q.back());
      alpha.push_back(q.back().dot(w));
      orthogonalize(w, locked);
      orthogonalize(w, q);
      const double b = w.norm();
      if (j + 1 == steps || b < 1e-14) {
        beta_last = b;
        break;
      }
      beta.push_back(b);
      q.push_back(w / b);
    }
    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) t(i, i) = alpha[static_cast<std::size_t>(i)];
    for (int i = 0; i + 1 < m; ++i)
      t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const double theta_max = es.eigenvalues().cwiseAbs().maxCoeff();

    std::vector<RitzPair> out;
    for (int i = m - 1; i >= 0; --i) {
      const double theta = es.eigenvalues()[i];
      const double bound = std::abs(beta_last * es.eigenvectors()(m - 1, i));
      if (bound > 1e-12 * theta_max || theta <= 0.0) break;
      Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
      for (int j = 0; j < m; ++j) y += es.eigenvectors()(j, i) * q[static_cast<std::size_t>(j)];
      y.normalize();
      const double lambda = y.dot(a * y);
      out.push_back({lambda, std::move(y)});
    }
    const bool enough = static_cast<int>(out.size()) >= std::min(wanted, free_dim);
    if (enough || steps >= max_steps || beta_last < 1e-14) return out;
    steps = std::min(max_steps, 2 * steps);
  }
}

/// Number of eigenvalues of the symmetric matrix `a` above `t`, from the
/// inertia of an LDLᵀ factorization of a - t.
int count_above(const SpMat& a, double t) {
  SpMat m = a;
  for (Eigen::Index i = 0; i < m.rows(); ++i) m.coeffRef(i, i) -= t;
  Eigen::SimplicialLDLT<SpMat> ldlt(m);
  if (ldlt.info() != Eigen::Success) throw EigensolverFailure("inertia factorization failed", {});
  return static_cast<int>((ldlt.vectorD().array() > 0.0).count());
}

struct ModeSpectrum {
  std::vector<RitzPair> pairs;     // descending
  std::vector<double> spill;       // further converged eigenvalues
  int above_lower = 0;             // eigenvalues above -threshold
  int above_upper = 0;             // eigenvalues above +threshold
  double below_gap = 0.0;          // distance from -threshold to the next eigenvalue below
};

/// Top `wanted` eigenpairs of the mode operator `a`, descending. Lanczos is
/// restarted on the complement of the accepted vectors, which recovers
/// repeated eigenvalues.
void mode_pairs(ModeSpectrum& m, const SpMat& a, const ScalarField& U, double shift, int wanted,
                std::uint64_t seed) {
  if (wanted <= 0) return;
  const double sigma = (3.0 * U.cwiseAbs2()).maxCoeff() - 1.0 + shift + 0.5;
  SpMat b(a.rows(), a.cols());
  b.setIdentity();
  b *= sigma;
  b -= a;
  Eigen::SimplicialLLT<SpMat> llt(b);
  if (llt.info() != Eigen::Success)
    throw EigensolverFailure("shifted operator is not positive definite", {});

  std::vector<Eigen::VectorXd> locked;
  for (int run = 0; run < 2 * wanted + 2 && static_cast<int>(m.pairs.size()) < wanted; ++run) {
    auto found = lanczos_top(a, llt, locked, wanted - static_cast<int>(m.pairs.size()),
                             seed + static_cast<std::uint64_t>(run));
    if (found.empty()) break;
    for (auto& p : found) {
      if (static_cast<int>(m.pairs.size()) >= wanted) {
        m.spill.push_back(p.value);
        continue;
      }
      locked.push_back(p.vector);
      m.pairs.push_back(std::move(p));
    }
  }
  std::sort(m.pairs.begin(), m.pairs.end(),
            [](const RitzPair& x, const RitzPair& y) { return x.value > y.value; });
}

/// Distance from -threshold to the largest eigenvalue below it. A converged
/// Lanczos value is accepted when the inertia confirms nothing lies between;
/// otherwise the inertia is bisected to 2e-2. The continuous spectrum of the
/// mode starts at -1 + shift.
double below_gap(const SpMat& a, const ModeSpectrum& m, double shift, double threshold) {
  double candidate = -std::numeric_limits<double>::infinity();
  for (const auto& p : m.pairs)
    if (p.value < -threshold) candidate = std::max(candidate, p.value);
  for (double v : m.spill)
    if (v < -threshold) candidate = std::max(candidate, v);
  if (std::isfinite(candidate)) {
    const double probe = candidate + 1e-6 * (1.0 + std::abs(candidate));
    if (probe < -threshold && count_above(a, probe) == m.above_lower) return -threshold - candidate;
  }
  double lo = -2.0 + shift - threshold, hi = -threshold;
  if (count_above(a, lo) == m.above_lower) return -lo - threshold;
  while (hi - lo > 2e-2) {
    const double mid = 0.5 * (lo + hi);
    (count_above(a, mid) > m.above_lower ? lo : hi) = mid;
  }
  return -threshold - 0.5 * (lo + hi);
}

}  // namespace

Eigen::SparseMatrix<double> single_bump_operator(double beta,
                                                 std::shared_ptr<const GroundState> gs,
                                                 const Grid& grid) {
  const BlockProfile block(std::move(gs), gamma_of(beta));
  const Grid g = grid.with_boundary_decay(0.0);
  FieldPair ansatz{g, bump_values(block, g), ScalarField()};
  ansatz.v = ansatz.u;
  return linearized_matrix(ansatz, SystemParams::make(beta, 0.0));
}

EigenReport linearized_spectrum(double beta, std::shared_ptr<const GroundState> gs,
                                const Grid& grid, int k) {
  if (!(beta < 1.0)) throw DomainError("linearized_spectrum: beta must be below 1");
  if (!gs || gs->dim() != grid.dim)
    throw DomainError("linearized_spectrum: ground state dimension differs from grid");
  if (k < grid.dim + 2) throw DomainError("linearized_spectrum: k must be at least N + 2");

  const BlockProfile block(gs, gamma_of(beta));
  const ScalarField U = bump_values(block, grid);
  const SpMat lap = laplacian_matrix(grid.with_boundary_decay(0.0));

  EigenReport report;
  report.kernel_threshold = 10.0 * grid.spacing * grid.spacing;
  const double thr = report.kernel_threshold;
  // Counts first, so each mode knows how many pairs the top k can need.
  const SpMat a_sym = scalar_operator(lap, U, beta);
  const SpMat a_anti = scalar_operator(lap, U, -beta);
  ModeSpectrum sym, anti;
  sym.above_lower = count_above(a_sym, -thr);
  sym.above_upper = count_above(a_sym, thr);
  anti.above_lower = count_above(a_anti, -thr);
  anti.above_upper = count_above(a_anti, thr);
  const int above = sym.above_lower + anti.above_lower;
  const int extra = std::max(0, k - above);
  mode_pairs(sym, a_sym, U, beta, sym.above_lower + extra, 0x5eedULL);
  mode_pairs(anti, a_anti, U, -beta, anti.above_lower + extra, 0xa17eULL);
  sym.below_gap = below_gap(a_sym, sym, beta, thr);
  anti.below_gap = below_gap(a_anti, anti, -beta, thr);

  struct Entry {
    double value;
    FieldPair field;
  };
  std::vector<Entry> all;
  const double scale = 1.0 / std::sqrt(2.0 * grid.cell_volume());
  for (const auto& p : sym.pairs) all.push_back({p.value, {grid, scale * p.vector, scale * p.vector}});
  for (const auto& p : anti.pairs)
    all.push_back({p.value, {grid, scale * p.vector, -scale * p.vector}});
  std::stable_sort(all.begin(), all.end(),
                   [](const Entry& x, const Entry& y) { return x.value > y.value; });
  const int expected = std::max(k, above);
  if (static_cast<int>(all.size()) < expected) {
    std::ostringstream msg;
    msg << "eigensolver converged only " << all.size() << " of " << expected << " pairs";
    throw EigensolverFailure(msg.str(), {});
  }

  report.kernel_dimension = (sym.above_lower - sym.above_upper) + (anti.above_lower - anti.above_upper);
  double gap = std::min(sym.below_gap, anti.below_gap);
  const SpMat coupled = single_bump_operator(beta, gs, grid);
  for (std::size_t i = 0; i < all.size() && static_cast<int>(i) < expected; ++i) {
    const double lambda = all[i].value;
    if (lambda > thr) {
      ++report.positive_count;
      gap = std::min(gap, lambda - thr);
    }
    Eigen::VectorXd x(2 * all[i].field.u.size());
    for (Eigen::Index j = 0; j < all[i].field.u.size(); ++j) {
      x[2 * j] = all[i].field.u[j];
      x[2 * j + 1] = all[i].field.v[j];
    }
    report.residuals.push_back((coupled * x - lambda * x).norm() / x.norm());
    report.eigenvalues.push_back(lambda);
    report.eigenfields.push_back(std::move(all[i].field));
  }
  for (double r : report.residuals)
    if (!(r <= 1e-6)) throw EigensolverFailure("eigen-residual above 1e-6", report.residuals);
  report.spectral_gap = gap;
  return report;
}

NondegeneracyReport nondegeneracy_check(double beta, std::shared_ptr<const GroundState> gs,
                                        const Grid& grid) {
  if (!(beta > -1.0 && beta < 1.0)) throw DomainError("nondegeneracy_check: beta must lie in (-1, 1)");
  const int N = grid.dim;
  const EigenReport eig = linearized_spectrum(beta, gs, grid, N + 2);

  NondegeneracyReport r;
  r.beta = beta;
  r.dim = N;
  r.kernel_threshold = eig.kernel_threshold;
  std::vector<const FieldPair*> kernel;
  for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i)
    if (std::abs(eig.eigenvalues[i]) <= eig.kernel_threshold) {
      r.near_zero.push_back(eig.eigenvalues[i]);
      kernel.push_back(&eig.eigenfields[i]);
    }
  r.kernel_dimension = std::max(eig.kernel_dimension, static_cast<int>(kernel.size()));

  const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
  auto stack = [n](const FieldPair& f) {
    Eigen::VectorXd x(2 * n);
    x << f.u, f.v;
    return x;
  };
  Configuration single{N, 10.0, {Point{}}};
  const auto modes = translation_modes(single, BlockProfile(gs, gamma_of(beta)), grid);
  Eigen::MatrixXd T(2 * n, N);
  for (int k = 0; k < N; ++k) T.col(k) = stack(modes[static_cast<std::size_t>(k)]);
  const Eigen::MatrixXd Tq = Eigen::HouseholderQR<Eigen::MatrixXd>(T).householderQ() *
                             Eigen::MatrixXd::Identity(2 * n, N);
  r.angles.assign(static_cast<std::size_t>(N), M_PI / 2.0);
  if (!kernel.empty()) {
    Eigen::MatrixXd K(2 * n, static_cast<Eigen::Index>(kernel.size()));
    for (std::size_t j = 0; j < kernel.size(); ++j) K.col(static_cast<Eigen::Index>(j)) = stack(*kernel[j]);
    const Eigen::MatrixXd Kq = Eigen::HouseholderQR<Eigen::MatrixXd>(K).householderQ() *
                               Eigen::MatrixXd::Identity(2 * n, K.cols());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Tq.transpose() * Kq);
    const auto& s = svd.singularValues();
    for (Eigen::Index i = 0; i < s.size() && i < N; ++i)
      r.angles[static_cast<std::size_t>(i)] = std::acos(std::clamp(s[i], -1.0, 1.0));
  }
  r.max_angle = *std::max_element(r.angles.begin(), r.angles.end());
  r.passed = r.kernel_dimension == N && r.max_angle < 1e-2;
  return r;
}

DegeneracySweep degeneracy_sweep(const std::vector<double>& betas,
                                 std::shared_ptr<const GroundState> gs, const Grid& grid) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  DegeneracySweep out{{}, {}, {}, nan, nan, nan, nan};
  const int N = grid.dim;
  std::vector<double> sorted = betas;
  std::sort(sorted.begin(), sorted.end());
  for (double b : sorted) {
    const EigenReport eig = linearized_spectrum(b, gs, grid, N + 2);
    std::vector<double> mags;
    for (double l : eig.eigenvalues) mags.push_back(std::abs(l));
    std::sort(mags.begin(), mags.end());
    out.betas.push_back(b);
    out.kernel_dims.push_back(eig.kernel_dimension);
    const double below = eig.spectral_gap + eig.kernel_threshold;
    out.nearest_extra.push_back(mags.size() > static_cast<std::size_t>(N)
                                    ? std::min(mags[static_cast<std::size_t>(N)], below)
                                    : below);
  }
  const auto count = static_cast<std::ptrdiff_t>(out.betas.size());
  // Scan down from zero on the negative side.
  double last_ok = 0.0;
  for (std::ptrdiff_t i = count - 1; i >= 0; --i) {
    const double b = out.betas[static_cast<std::size_t>(i)];
    if (!(b < 0.0)) continue;
    if (out.kernel_dims[static_cast<std::size_t>(i)] > N) {
      out.negative_lo = b;
      out.negative_hi = last_ok;
      break;
    }
    last_ok = b;
  }
  last_ok = 0.0;
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const double b = out.betas[static_cast<std::size_t>(i)];
    if (!(b > 0.0)) continue;
    if (out.kernel_dims[static_cast<std::size_t>(i)] > N) {
      out.positive_lo = last_ok;
      out.positive_hi = b;
      break;
    }
    last_ok = b;
  }
  return out;
}

nlohmann::json to_json(const EigenReport& r) {
  return {{"eigenvalues", r.eigenvalues}, {"kernel_dim", r.kernel_dimension}, {"gap", r.spectral_gap}};
}

}  // namespace lsr
