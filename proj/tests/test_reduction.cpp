#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "lsr/ansatz.hpp"
#include "lsr/error.hpp"
#include "lsr/reduction.hpp"
#include "support.hpp"

using namespace lsr;

TEST_CASE("nonlinear remainder") {
  const Problem pr = test::problem_1d(0.5, 0.0, 25.0, 0.05);
  const Configuration c{1, 10.0, {Point{}}};
  const FieldPair U = assemble_ansatz(c, pr.block(), pr.grid);
  const FieldPair zero = FieldPair::zeros(pr.grid);
  CHECK(nonlinear_remainder(zero, U).u.cwiseAbs().maxCoeff() == 0.0);

  const FieldPair phi{pr.grid, 0.3 * test::bump_noise(pr.grid, 1), 0.2 * test::bump_noise(pr.grid, 2)};
  const FieldPair cubic = nonlinear_remainder(phi, zero);
  CHECK((cubic.u - phi.u.cwiseProduct(phi.u).cwiseProduct(phi.u)).cwiseAbs().maxCoeff() == 0.0);

  // |3Uφ² + φ³| / F <= 3UF |φ/F|² + F² |φ/F|³ at every node.
  const ScalarField F = weight_F(pr.grid, c, pr.params.gamma, pr.nu);
  const double C = std::max((3.0 * U.u.cwiseProduct(F)).maxCoeff(), F.cwiseAbs2().maxCoeff());
  for (double scale : {1e-3, 1e-2, 0.1, 1.0}) {
    const FieldPair f = scale * phi;
    const double s = star_norm(f, F);
    CHECK(star_norm(nonlinear_remainder(f, U), F) <= C * (s * s + s * s * s));
  }
}

TEST_CASE("single spike without potential is exact") {
  const Problem pr = test::problem_1d(0.5, 0.0, 22.0, 0.025);
  const SpikeSolution s = solve_nonlinear({1, 10.0, {Point{}}}, pr);
  CHECK(s.correction_star < 1e-8);
  for (double c : s.multipliers) CHECK(std::abs(c) < 1e-8);
  CHECK(s.positive);
  const MultiplierCheck m = multiplier_vanishing_check(s);
  CHECK(m.passed);
  CHECK(s.fixed_point_residual <= 1e-9);

  const ReducedEnergyReport r = reduced_energy({1, 10.0, {Point{}}}, pr);
  CHECK(r.value == doctest::Approx(energy_I(0.5, *pr.ground_state)).epsilon(1e-6));
  CHECK(std::isinf(r.boundary_distance));
  CHECK(r.gradient_norm < 1e-6);
}

TEST_CASE("two spikes with a weak potential") {
  const Problem pr = test::problem_1d(0.5, 1e-3, 35.0, 0.025, default_potential(), default_potential());
  std::vector<double> history;
  FixedPointOptions opt;
  opt.on_iteration = [&](const IterationRecord& r) { history.push_back(r.update_star); };
  const SpikeSolution s = solve_nonlinear(symmetric_pair(1, 10.0, pr.params.gamma), pr, opt);
  CHECK(s.iterations <= 20);
  CHECK(history.size() == s.update_history.size());
  CHECK(s.contraction_factor <= 0.5);
  CHECK(s.fixed_point_residual <= opt.tol);
  CHECK(s.positive);
  CHECK_FALSE(s.epsilon_hypothesis);
  // Identical potentials: the components agree.
  CHECK((s.fields.u - s.fields.v).cwiseAbs().maxCoeff() <= 1e-10);
  const SpikeSolution far = solve_nonlinear(symmetric_pair(1, 12.0, pr.params.gamma), pr, opt);
  CHECK(far.correction_star < s.correction_star);
}

TEST_CASE("fixed-point failures") {
  const Problem pr = test::problem_1d(0.5, 1e-3, 35.0, 0.05, default_potential(), default_potential());
  FixedPointOptions opt;
  opt.max_iter = 1;
  opt.tol = 1e-15;
  CHECK_THROWS_AS(solve_nonlinear(symmetric_pair(1, 10.0, pr.params.gamma), pr, opt), ContractionFailure);
  const Configuration close{1, 10.0, {Point{-3, 0, 0}, Point{3, 0, 0}}};
  CHECK_THROWS_AS(solve_nonlinear(close, pr), ValidationError);
}

TEST_CASE("translation invariance without potential") {
  const Problem pr = test::problem_1d(0.5, 0.0, 40.0, 0.025);
  ReducedEnergyOptions opt;
  opt.gradient = false;
  const Configuration c = symmetric_pair(1, 10.0, pr.params.gamma);
  const double base = reduced_energy(c, pr, opt).value;
  for (double t : {-2.5, 1.0, 3.75}) {
    const double moved = reduced_energy(c.translated(Point{t, 0, 0}), pr, opt).value;
    CHECK(moved == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("two-spike interaction energy") {
  const double beta = 0.5;
  const Problem pr = test::problem_1d(beta, 0.0, 40.0, 0.025);
  ReducedEnergyOptions opt;
  opt.gradient = false;
  const double I = energy_I(beta, *pr.ground_state);
  double last = -INFINITY;
  for (double d : {16.0, 18.0, 20.0}) {
    const Configuration c{1, 10.0, {Point{-d / 2, 0, 0}, Point{d / 2, 0, 0}}};
    const double gap = reduced_energy(c, pr, opt).value - 2.0 * I;
    const double estimate = interaction_energy_estimate(*pr.ground_state, beta, d);
    CAPTURE(d);
    CHECK(gap < 0.0);
    CHECK(gap > last);
    CHECK(gap == doctest::Approx(estimate).epsilon(0.05));
    last = gap;
  }
}

TEST_CASE("interaction constant") {
  const auto gs = test::ground(1);
  CHECK(gamma1_constant(*gs) == doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(1e-7));
  const InteractionReport r = interaction_sweep(*gs, 1.0, {8.0, 10.0, 12.0});
  double last = INFINITY;
  for (const auto& p : r.points) {
    const double off = std::abs(p.ratio_to_gamma1 - 1.0);
    CHECK(off < last);
    last = off;
  }
  CHECK(std::abs(r.points.back().ratio_to_gamma1 - 1.0) < 0.05);
  // The integral is symmetric in the two centers; in 1D that is d -> -d.
  CHECK(interaction_integral(*gs, 0.8, 9.0) == doctest::Approx(interaction_integral(*gs, 0.8, -9.0)).epsilon(1e-12));
}

TEST_CASE("multipliers detect a non-critical configuration") {
  const Problem pr = test::problem_1d(0.5, 0.05, 30.0, 0.05, default_potential(), default_potential());
  const SpikeSolution off = solve_nonlinear({1, 10.0, {Point{3, 0, 0}}}, pr);
  const MultiplierCheck m = multiplier_vanishing_check(off);
  CHECK_FALSE(m.passed);
  CHECK(m.max_scaled_multiplier > 1e-6);
  const SpikeSolution centered = solve_nonlinear({1, 10.0, {Point{}}}, pr);
  CHECK(multiplier_vanishing_check(centered).max_scaled_multiplier < 1e-10);
}

TEST_CASE("increment of an isolated spike") {
  const Problem pr = test::problem_1d(0.5, 0.0, 70.0, 0.05);
  const double far = 3.0 * 10.0 / pr.params.gamma;
  const IncrementReport a = increment_diagnostics({1, 10.0, {Point{}}}, Point{far, 0, 0}, pr);
  const IncrementReport b = increment_diagnostics({1, 10.0, {Point{}}}, Point{far, 0, 0}, pr);
  CHECK(a.h1_norm_squared < 1e-4);
  CHECK(a.distance == doctest::Approx(far));
  CHECK(a.h1_norm_squared == b.h1_norm_squared);
  CHECK(a.bound_shape == b.bound_shape);
}

TEST_CASE("report JSON") {
  const Problem pr = test::problem_1d(0.5, 0.0, 22.0, 0.05);
  const ReducedEnergyReport r = reduced_energy({1, 10.0, {Point{}}}, pr);
  const nlohmann::json j = to_json(r);
  CHECK(j.at("boundary_distance").is_null());
  CHECK(j.at("N").get<double>() == r.value);
}
