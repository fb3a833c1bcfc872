#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "lsr/error.hpp"
#include "lsr/landscape.hpp"
#include "lsr/simplex.hpp"
#include "support.hpp"

using namespace lsr;

TEST_CASE("simplex finds the top of a quadratic") {
  const Eigen::Vector3d top(1.0, -2.0, 0.5);
  const auto f = [&](const Eigen::VectorXd& x) { return -(x - top).squaredNorm() - 0.1 * (x[0] - top[0]) * (x[1] - top[1]); };
  const SimplexResult r = maximize_simplex(f, Eigen::VectorXd::Zero(3));
  CHECK(r.converged);
  CHECK((r.x - top).cwiseAbs().maxCoeff() < 1e-5);
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("one spike settles at the potential center") {
  const Problem pr = test::problem_1d(0.5, 1e-3, 30.0, 0.05, default_potential(), default_potential());
  const double h = pr.grid.spacing;
  ReducedEnergyOptions plain;
  plain.gradient = false;
  // Dense scan oracle.
  double best = -INFINITY, arg = 0.0;
  for (int k = -12; k <= 12; ++k) {
    const double x = k * h;
    const double v = reduced_energy({1, 10.0, {Point{x, 0, 0}}}, pr, plain).value;
    if (v > best) {
      best = v;
      arg = x;
    }
  }
  OptimizerOptions opt;
  opt.seed = 7;
  const OptimizationReport r = optimize_configuration(1, pr, {1, 10.0, {Point{1.5, 0, 0}}}, opt);
  CHECK(std::abs(r.best.configuration.centers[0][0] - arg) <= 2.0 * h);
  CHECK(r.best.value >= best - 1e-12);
  CHECK_FALSE(r.boundary_maximizer);
  CHECK(r.restarts.size() == 5);
  CHECK(r.best.max_multiplier < 1e-6);
}

TEST_CASE("without a potential the reduced energy is flat") {
  const Problem pr = test::problem_1d(0.5, 0.0, 30.0, 0.05);
  OptimizerOptions opt;
  opt.restarts = 2;
  const OptimizationReport r = optimize_configuration(1, pr, {1, 10.0, {Point{2.0, 0, 0}}}, opt);
  CHECK(r.best.gradient_norm < 1e-5);
  CHECK(r.best.value == doctest::Approx(energy_I(0.5, *pr.ground_state)).epsilon(1e-8));
}

TEST_CASE("optimizer is deterministic across thread counts") {
  const Problem pr = test::problem_1d(0.5, 1e-3, 30.0, 0.1, default_potential(), default_potential());
  OptimizerOptions opt;
  opt.seed = 3;
  opt.restarts = 3;
  opt.simplex.max_evaluations = 60;
  opt.threads = 1;
  const OptimizationReport a = optimize_configuration(1, pr, {1, 10.0, {Point{1.0, 0, 0}}}, opt);
  opt.threads = 3;
  const OptimizationReport b = optimize_configuration(1, pr, {1, 10.0, {Point{1.0, 0, 0}}}, opt);
  CHECK(a.best.value == b.best.value);
  CHECK(a.best.configuration == b.best.configuration);
  for (std::size_t i = 0; i < a.restarts.size(); ++i) CHECK(a.restarts[i].end == b.restarts[i].end);
}

TEST_CASE("two spikes beat the best symmetric pair") {
  // With one spike pinned at the potential center the pair gains more than
  // any placement symmetric about it.
  const Problem pr = test::problem_1d(0.5, 1e-3, 62.0, 0.05, default_potential(), default_potential());
  ReducedEnergyOptions plain;
  plain.gradient = false;
  const double gamma = pr.params.gamma;
  double symmetric = -INFINITY;
  for (double s = 10.0 / gamma; s <= 38.0; s += 1.0) {
    const Configuration c{1, 10.0, {Point{-s / 2, 0, 0}, Point{s / 2, 0, 0}}};
    symmetric = std::max(symmetric, reduced_energy(c, pr, plain).value);
  }
  OptimizerOptions opt;
  opt.restarts = 2;
  const Configuration init{1, 10.0, {Point{0, 0, 0}, Point{2.0 * 10.0 / gamma, 0, 0}}};
  const OptimizationReport r = optimize_configuration(2, pr, init, opt);
  CHECK(r.best.value > symmetric);
  CHECK(r.best.boundary_distance > 0.0);
}

TEST_CASE("ladder of height one") {
  const Problem pr = test::problem_1d(0.5, 1e-3, 30.0, 0.05, default_potential(), default_potential());
  LadderOptions opt;
  opt.optimizer.restarts = 2;
  const LadderReport r = energy_ladder(1, pr, opt);
  REQUIRE(r.levels.size() == 1);
  CHECK(r.levels[0].gap > 0.0);
  CHECK(r.all_gaps_positive);
  CHECK(r.energy_I_grid == doctest::Approx(r.energy_I).epsilon(1e-8));
  CHECK_THROWS_AS(energy_ladder(0, pr, opt), DomainError);
}

TEST_CASE("far spike placement") {
  const Problem weak = test::problem_1d(0.5, 1e-3, 60.0, 0.05, default_potential(), default_potential());
  const Problem none = test::problem_1d(0.5, 0.0, 60.0, 0.05);
  const double base = 2.0 * 10.0 / weak.params.gamma;
  CHECK(far_spike_distance(none, 10.0) == doctest::Approx(base));
  CHECK(far_spike_distance(weak, 10.0) >= base);
}

TEST_CASE("thread count") {
  CHECK(thread_count(3) == 3);
  setenv("LSR_THREADS", "2", 1);
  CHECK(thread_count(0) == 2);
  unsetenv("LSR_THREADS");
  CHECK(thread_count(0) >= 1);
}
