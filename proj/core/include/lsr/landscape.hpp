#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lsr/reduction.hpp"
#include "lsr/simplex.hpp"

namespace lsr {

struct OptimizerOptions {
  int restarts = 5;
  std::uint64_t seed = 0;
  /// Standard deviation of restart perturbations, in units of 1/γ.
  double perturbation = 1.0;
  /// Centers are kept within |P|_∞ <= search_radius. Non-positive means
  /// the largest radius the grid allows (half width - 15/γ).
  double search_radius = 0.0;
  /// Weight of the squared separation and box violations.
  double penalty = 1e3;
  SimplexOptions simplex{0.5, 1e-6, 1e-13, 1500};
  /// Step of a final simplex polish around the best restart.
  double polish_step = 0.05;
  FixedPointOptions fixed_point;
  /// 0 reads LSR_THREADS, falling back to the hardware concurrency.
  int threads = 0;
};

struct RestartRecord {
  Configuration start;
  Configuration end;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
  /// Ended within 1e-3 μ/γ of ∂Ω_m or on the search box.
  bool on_boundary = false;
};

struct OptimizationReport {
  ReducedEnergyReport best;
  std::vector<RestartRecord> restarts;
  bool boundary_maximizer = false;
  std::vector<std::string> warnings;
};

/// Penalized simplex ascent of N over Ω_m with restarts from perturbed copies
/// of `init`. Restarts run in parallel; results do not depend on the thread count.
OptimizationReport optimize_configuration(int m, const Problem& problem, const Configuration& init,
                                          const OptimizerOptions& options = {});

struct LadderLevel {
  int m = 0;
  double R = 0.0;
  /// R_m - R_{m-1} - I, with R_0 = 0 and I the on-grid single-spike energy.
  double gap = 0.0;
  OptimizationReport optimization;
};

struct LadderReport {
  std::vector<LadderLevel> levels;
  /// I(U,V) by radial quadrature.
  double energy_I = 0.0;
  /// J of the single spike solved on the same grid with ε = 0.
  double energy_I_grid = 0.0;
  bool all_gaps_positive = false;
  std::vector<std::string> warnings;
};

struct LadderOptions {
  OptimizerOptions optimizer;
  double mu = 10.0;
  /// Center of the first spike; defaults to the potential center.
  bool start_at_potential_center = true;
};

/// R_1..R_{m_max}. Level m+1 is warm-started from level m's maximizer with a
/// far spike appended along +x_1.
LadderReport energy_ladder(int m_max, const Problem& problem, const LadderOptions& options = {});

/// Distance at which the new spike of the ladder warm start is placed:
/// max(2μ/γ, r) where ε P(r) first exceeds the block tail γ w(γ r).
double far_spike_distance(const Problem& problem, double mu);

/// Energy of one spike at the origin solved with ε = 0 on the problem grid.
double grid_single_spike_energy(const Problem& problem, double mu);

int thread_count(int requested = 0);

nlohmann::json to_json(const OptimizationReport& r);
nlohmann::json to_json(const LadderReport& r);

}  // namespace lsr
