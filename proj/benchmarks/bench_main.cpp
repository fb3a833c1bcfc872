#include <memory>

#include <benchmark/benchmark.h>

#include "lsr/ansatz.hpp"
#include "lsr/field.hpp"
#include "lsr/ground_state.hpp"
#include "lsr/linsolve.hpp"
#include "lsr/potential.hpp"
#include "lsr/problem.hpp"
#include "lsr/reduction.hpp"

using namespace lsr;

namespace {

std::shared_ptr<const GroundState> ground(int dim) {
  static std::shared_ptr<const GroundState> cache[4];
  if (!cache[dim]) cache[dim] = std::make_shared<const GroundState>(solve_ground_state(dim, 1e-6));
  return cache[dim];
}

Problem problem(double h, double eps) {
  const SystemParams p = SystemParams::make(0.5, eps, default_potential(), default_potential());
  return {ground(1), p, reduction_grid(1, 35.0, h, p.gamma)};
}

}  // namespace

static void BM_GroundState(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_ground_state(dim, 1e-6));
}
BENCHMARK(BM_GroundState)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_Laplacian2D(benchmark::State& state) {
  const Grid g = Grid::make(2, 10.0, 10.0 / static_cast<double>(state.range(0)));
  const ScalarField f = ScalarField::Random(static_cast<Eigen::Index>(g.size()));
  for (auto _ : state) benchmark::DoNotOptimize(laplacian(f, g));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.size()));
}
BENCHMARK(BM_Laplacian2D)->Arg(50)->Arg(100)->Arg(200);

static void BM_ProjectedSolve(benchmark::State& state) {
  const Problem pr = problem(1.0 / static_cast<double>(state.range(0)), 0.0);
  const Configuration c = symmetric_pair(1, 10.0, pr.params.gamma);
  const FieldPair U = assemble_ansatz(c, pr.block(), pr.grid);
  const FieldPair rhs = residual_G(U, pr.params);
  for (auto _ : state) benchmark::DoNotOptimize(solve_projected(rhs, c, pr));
}
BENCHMARK(BM_ProjectedSolve)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_SolveNonlinear(benchmark::State& state) {
  const Problem pr = problem(1.0 / static_cast<double>(state.range(0)), 1e-3);
  const Configuration c = symmetric_pair(1, 10.0, pr.params.gamma);
  for (auto _ : state) benchmark::DoNotOptimize(solve_nonlinear(c, pr));
}
BENCHMARK(BM_SolveNonlinear)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
