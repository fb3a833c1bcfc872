#include <doctest.h>

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "lsr/ansatz.hpp"
#include "lsr/error.hpp"
#include "lsr/linsolve.hpp"
#include "lsr/spectrum.hpp"
#include "support.hpp"

using namespace lsr;

namespace {

Eigen::VectorXd stack(const FieldPair& f) {
  Eigen::VectorXd x(2 * f.u.size());
  x << f.u, f.v;
  return x;
}

FieldPair unstack(const Grid& g, const Eigen::VectorXd& x) {
  const auto n = static_cast<Eigen::Index>(g.size());
  return {g, x.head(n), x.segment(n, n)};
}

}  // namespace

TEST_CASE("linearized operator") {
  const Problem pr = test::problem_1d(0.5, 0.0, 22.0, 0.05);
  const Configuration c{1, 10.0, {Point{}}};
  const FieldPair ansatz = assemble_ansatz(c, pr.block(), pr.grid);
  CHECK(apply_L(FieldPair::zeros(pr.grid), pr.params, ansatz).u.cwiseAbs().maxCoeff() == 0.0);

  SUBCASE("symmetric on decaying fields") {
    const Problem p2 = test::problem_1d(0.5, 0.3, 22.0, 0.05, default_potential(),
                                        PotentialSpec::exponential(2.0, 0.2));
    const FieldPair f{p2.grid, test::bump_noise(p2.grid, 1), test::bump_noise(p2.grid, 2)};
    const FieldPair g{p2.grid, test::bump_noise(p2.grid, 3), test::bump_noise(p2.grid, 4)};
    const double a = inner(apply_L(f, p2.params, ansatz), g);
    const double b = inner(f, apply_L(g, p2.params, ansatz));
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
  }
  SUBCASE("matrix form matches") {
    const FieldPair f{pr.grid, test::bump_noise(pr.grid, 5), test::bump_noise(pr.grid, 6)};
    const FieldPair lf = apply_L(f, pr.params, ansatz);
    Eigen::VectorXd x(2 * f.u.size());
    for (Eigen::Index i = 0; i < f.u.size(); ++i) {
      x[2 * i] = f.u[i];
      x[2 * i + 1] = f.v[i];
    }
    const Eigen::VectorXd y = linearized_matrix(ansatz, pr.params) * x;
    for (Eigen::Index i = 0; i < f.u.size(); ++i) {
      REQUIRE(y[2 * i] == doctest::Approx(lf.u[i]).epsilon(1e-12));
      REQUIRE(y[2 * i + 1] == doctest::Approx(lf.v[i]).epsilon(1e-12));
    }
  }
  SUBCASE("translation modes are in the kernel up to O(h^2)") {
    auto sup = [](double h) {
      const SystemParams p = SystemParams::make(0.5, 0.0);
      const Problem q{test::ground(1), p, reduction_grid(1, 22.0, h, p.gamma, 2)};
      const Configuration one{1, 10.0, {Point{}}};
      const FieldPair a = assemble_ansatz(one, q.block(), q.grid);
      const FieldPair t = translation_modes(one, q.block(), q.grid)[0];
      const FieldPair r = apply_L(t, p, a);
      return r.u.cwiseAbs().maxCoeff();
    };
    CHECK(sup(0.1) / sup(0.05) == doctest::Approx(4.0).epsilon(0.1));
  }
}

TEST_CASE("projected solve") {
  const Problem pr = test::problem_1d(0.5, 0.0, 22.0, 0.05);
  const Configuration c{1, 10.0, {Point{}}};

  SUBCASE("zero right-hand side") {
    const ProjectedSolution s = solve_projected(FieldPair::zeros(pr.grid), c, pr);
    CHECK(s.correction.u.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.multipliers[0] == 0.0);
  }
  SUBCASE("swap symmetry") {
    const Problem p2 = test::problem_1d(0.5, 0.2, 22.0, 0.05, default_potential(), default_potential());
    const ScalarField h1 = test::bump_noise(p2.grid, 11), h2 = test::bump_noise(p2.grid, 12);
    const ProjectedSolution same = solve_projected({p2.grid, h1, h1}, c, p2);
    CHECK((same.correction.u - same.correction.v).cwiseAbs().maxCoeff() <=
          1e-10 * same.correction.u.cwiseAbs().maxCoeff());
    const ProjectedSolution a = solve_projected({p2.grid, h1, h2}, c, p2);
    const ProjectedSolution b = solve_projected({p2.grid, h2, h1}, c, p2);
    CHECK((a.correction.u - b.correction.v).cwiseAbs().maxCoeff() <=
          1e-10 * a.correction.u.cwiseAbs().maxCoeff());
  }
  SUBCASE("orthogonality and residual") {
    const Configuration two{1, 10.0, {Point{-8, 0, 0}, Point{8, 0, 0}}};
    const Problem p2 = test::problem_1d(0.5, 1e-3, 32.0, 0.05, default_potential(), default_potential());
    const FieldPair h{p2.grid, test::bump_noise(p2.grid, 13), test::bump_noise(p2.grid, 14)};
    const ProjectedSolution s = solve_projected(h, two, p2);
    const double scale = std::sqrt(inner(h, h));
    const auto D = kernel_basis(two, p2.block(), p2.grid);
    for (const auto& d : D) CHECK(std::abs(inner(s.correction, d)) <= 1e-8 * scale);
    CHECK(s.orthogonality <= 1e-8 * scale);
    CHECK(s.residual <= 1e-8 * h.u.cwiseAbs().maxCoeff());
  }
  SUBCASE("dense oracle on a coarse grid") {
    const Problem coarse = test::problem_1d(0.5, 0.0, 22.0, 0.2);
    const Grid& g = coarse.grid;
    const FieldPair ansatz = assemble_ansatz(c, coarse.block(), g);
    const auto D = kernel_basis(c, coarse.block(), g);
    const auto n = static_cast<Eigen::Index>(2 * g.size());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e[j] = 1.0;
      K.col(j).head(n) = stack(apply_L(unstack(g, e), coarse.params, ansatz));
      K(n, j) = -inner(unstack(g, e), D[0]);
    }
    K.col(n).head(n) = -stack(D[0]);
    const FieldPair h{g, test::bump_noise(g, 15), test::bump_noise(g, 16)};
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs.head(n) = stack(h);
    const Eigen::VectorXd x = K.fullPivLu().solve(rhs);

    const ProjectedSolution s = solve_projected(h, c, coarse);
    CHECK((stack(s.correction) - x.head(n)).cwiseAbs().maxCoeff() <= 1e-8 * x.head(n).cwiseAbs().maxCoeff());
    CHECK(s.multipliers[0] == doctest::Approx(x[n]).epsilon(1e-8));
  }
  SUBCASE("configurations outside the admissible set are rejected") {
    const Configuration close{1, 10.0, {Point{-2, 0, 0}, Point{2, 0, 0}}};
    CHECK_THROWS_AS(solve_projected(FieldPair::zeros(pr.grid), close, pr), ValidationError);
  }
}

TEST_CASE("spectrum at beta = 0 against a dense oracle") {
  const auto gs = test::ground(1);
  const Grid g = Grid::make(1, 20.0, 0.05, 2);
  const EigenReport r = linearized_spectrum(0.0, gs, g, 3);

  // Scalar operator d²/dx² - 1 + 3w² with the three-point stencil, dense.
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  const double ih2 = 1.0 / (g.spacing * g.spacing);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = gs->value(std::abs(g.point(static_cast<std::size_t>(i))[0]));
    A(i, i) = -2.0 * ih2 - 1.0 + 3.0 * w * w;
    if (i > 0) A(i, i - 1) = ih2;
    if (i + 1 < n) A(i, i + 1) = ih2;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const double top = es.eigenvalues()[n - 1];
  CHECK(top == doctest::Approx(3.0).epsilon(1e-3));
  REQUIRE(r.eigenvalues.size() >= 3);
  CHECK(r.eigenvalues[0] == doctest::Approx(top).epsilon(1e-10));
  CHECK(r.eigenvalues[1] == doctest::Approx(top).epsilon(1e-10));
  CHECK(std::abs(r.eigenvalues[2] - es.eigenvalues()[n - 2]) < 1e-10);
  CHECK(r.kernel_dimension == 2);

  for (const auto& f : r.eigenfields) CHECK(inner(f, f) == doctest::Approx(1.0).epsilon(1e-8));
  for (double res : r.residuals) CHECK(res <= 1e-6);
}

TEST_CASE("zero modes at beta = 0 contain the translation mode") {
  // Decoupled components: the kernel is {(w', 0), (0, w')}.
  const NondegeneracyReport nd = nondegeneracy_check(0.0, test::ground(1), Grid::make(1, 20.0, 0.05));
  CHECK(nd.kernel_dimension == 2);
  CHECK_FALSE(nd.passed);
  CHECK(nd.max_angle < 1e-2);
}

TEST_CASE("spectrum properties") {
  const auto gs = test::ground(1);
  const EigenReport a = linearized_spectrum(0.5, gs, Grid::make(1, 20.0, 0.1), 5);
  const Grid fine = Grid::make(1, 20.0, 0.05);
  const EigenReport b = linearized_spectrum(0.5, gs, fine, 5);
  CHECK(a.positive_count == b.positive_count);
  CHECK(a.positive_count == 2);
  for (std::size_t i = 1; i < a.eigenvalues.size(); ++i) CHECK(a.eigenvalues[i] <= a.eigenvalues[i - 1]);
  for (std::size_t i = 0; i < b.eigenfields.size(); ++i)
    for (std::size_t j = 0; j < b.eigenfields.size(); ++j)
      CHECK(fine.cell_volume() * (b.eigenfields[i].u.dot(b.eigenfields[j].u) + b.eigenfields[i].v.dot(b.eigenfields[j].v)) ==
            doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-8));
  // Antisymmetric mode eigenvalue γ²(3 - 2β/(1-β)) in 1D.
  CHECK(b.eigenvalues[1] == doctest::Approx(0.5 * (3.0 - 2.0)).epsilon(1e-6));
  CHECK(b.spectral_gap > 0.4);
  CHECK_THROWS_AS(linearized_spectrum(0.5, gs, Grid::make(1, 20.0, 0.1), 2), DomainError);
  CHECK_THROWS_AS(linearized_spectrum(1.0, gs, Grid::make(1, 20.0, 0.1), 3), DomainError);
}

TEST_CASE("nondegeneracy at beta = 0.5") {
  const NondegeneracyReport one = nondegeneracy_check(0.5, test::ground(1), Grid::make(1, 20.0, 0.1));
  CHECK(one.passed);
  CHECK(one.kernel_dimension == 1);
  const NondegeneracyReport two = nondegeneracy_check(0.5, test::ground(2), Grid::make(2, 8.0, 0.2));
  CHECK(two.kernel_dimension == 2);
  CHECK(two.max_angle < 1e-2);
}

TEST_CASE("degeneracy sweep in 1D") {
  std::vector<double> betas;
  for (int i = -3; i <= 9; ++i)
    if (i != 0) betas.push_back(0.1 * i);
  const DegeneracySweep s = degeneracy_sweep(betas, test::ground(1), Grid::make(1, 20.0, 0.1));
  CHECK(std::isnan(s.negative_lo));
  CHECK(s.positive_lo == doctest::Approx(0.5));
  CHECK(s.positive_hi == doctest::Approx(0.6));
  for (std::size_t i = 0; i < s.betas.size(); ++i) {
    if (std::abs(s.betas[i] - 0.6) < 1e-9) CHECK(s.kernel_dims[i] == 2);
    else CHECK(s.kernel_dims[i] == 1);
  }
}
