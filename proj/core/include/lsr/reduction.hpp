#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lsr/configuration.hpp"
#include "lsr/field.hpp"
#include "lsr/problem.hpp"

namespace lsr {

/// (U+φ)³ - U³ - 3U²φ = 3Uφ² + φ³, componentwise.
FieldPair nonlinear_remainder(const FieldPair& correction, const FieldPair& ansatz);

struct IterationRecord {
  int iteration = 0;
  /// *-norm of the change of (φ,ψ) in this step.
  double update_star = 0.0;
  double correction_star = 0.0;
  double max_multiplier = 0.0;
};

struct FixedPointOptions {
  double tol = 1e-9;
  int max_iter = 50;
  /// Reject configurations outside Ω_m.
  bool validate = true;
  std::function<void(const IterationRecord&)> on_iteration;
};

struct SpikeSolution {
  Configuration configuration;
  FieldPair ansatz;
  /// ansatz + correction
  FieldPair fields;
  FieldPair correction;
  /// c_jk, index j·N + k.
  std::vector<double> multipliers;
  /// ||D_jk|| in the ⟨·,·⟩ norm.
  std::vector<double> basis_norms;
  double correction_star = 0.0;
  int iterations = 0;
  std::vector<double> update_history;
  /// Largest ratio of successive updates after the first iterate.
  double contraction_factor = 0.0;
  /// ||(φ,ψ) - T(φ,ψ)||_* re-evaluated after convergence.
  double fixed_point_residual = 0.0;
  /// ||G(U,V)||_* of the bare ansatz.
  double ansatz_residual_star = 0.0;
  /// ||G(u,v)||_* of the corrected fields.
  double full_residual_star = 0.0;
  /// u > 0 and v > 0 at every interior node.
  bool positive = false;
  /// ε < e^{-2μ}.
  bool epsilon_hypothesis = false;
  double condition_estimate = 0.0;
};

/// Fixed-point iteration (φ,ψ) <- A(-G(U,V) - M(φ,ψ)) from zero, where A is
/// the projected linear solve. Throws ValidationError for configurations
/// outside Ω_m and ContractionFailure when the updates stop shrinking.
SpikeSolution solve_nonlinear(const Configuration& c, const Problem& problem,
                              const FixedPointOptions& options = {});

struct ReducedEnergyOptions {
  bool gradient = true;
  /// Central-difference step in the center coordinates.
  double fd_step = 1e-3;
  FixedPointOptions fixed_point;
};

struct ReducedEnergyReport {
  Configuration configuration;
  /// N(P) = J(u, v).
  double value = 0.0;
  /// I(U,V) by radial quadrature.
  double energy_I = 0.0;
  /// ∂N/∂P_jk by central differences, index j·N + k. Empty when not requested.
  std::vector<double> gradient;
  double gradient_norm = 0.0;
  /// min separation - μ/γ. Infinite for a single spike.
  double boundary_distance = 0.0;
  double max_multiplier = 0.0;
  double correction_star = 0.0;
  int iterations = 0;
};

ReducedEnergyReport reduced_energy(const Configuration& c, const Problem& problem,
                                   const ReducedEnergyOptions& options = {});

/// γ_1 = ∫ w³(x) e^{-x_1} dx.
double gamma1_constant(const GroundState& gs);

/// ∫ w³(γ(x - P_j)) w(γ(x - P_k)) dx with |P_j - P_k| = d.
double interaction_integral(const GroundState& gs, double gamma, double d);

struct InteractionPoint {
  double d = 0.0;
  double integral = 0.0;
  /// γ^N · integral / w(γd); tends to γ_1.
  double ratio = 0.0;
  double ratio_to_gamma1 = 0.0;
};

struct InteractionReport {
  double gamma = 1.0;
  double gamma1 = 0.0;
  std::vector<InteractionPoint> points;
};

InteractionReport interaction_sweep(const GroundState& gs, double gamma,
                                    const std::vector<double>& separations);

/// Leading interaction energy of two spikes at distance d:
/// -2 γ^{4-N} γ_1 w(γd).
double interaction_energy_estimate(const GroundState& gs, double beta, double d);

struct MultiplierCheck {
  double max_multiplier = 0.0;
  /// max |c_jk| · ||D_jk||.
  double max_scaled_multiplier = 0.0;
  double full_residual_star = 0.0;
  double multiplier_tol = 1e-6;
  double residual_tol = 1e-4;
  bool passed = false;
};

MultiplierCheck multiplier_vanishing_check(const SpikeSolution& sol, double multiplier_tol = 1e-6,
                                           double residual_tol = 1e-4);

struct IncrementReport {
  Point new_center{};
  /// Distance from the new center to the nearest old one.
  double distance = 0.0;
  /// ||φ_{m+1}||²_{H¹}.
  double h1_norm_squared = 0.0;
  /// Σ_j w(γ|P_{m+1} - P_j|), the shape of the bound with C = 1.
  double bound_shape = 0.0;
};

/// φ_{m+1} = (u,v)_{P ∪ {p_new}} - (u,v)_P - (U,V)_{p_new}.
IncrementReport increment_diagnostics(const Configuration& c, const Point& p_new,
                                      const Problem& problem,
                                      const FixedPointOptions& options = {});

struct DecayPoint {
  double mu = 0.0;
  double star_norm = 0.0;
  double log_star_norm = 0.0;
};

struct ResidualDecayReport {
  std::vector<DecayPoint> points;
  double slope = 0.0;
  double r_squared = 0.0;
  bool strictly_decreasing = false;
};

/// ||G(U,V)||_* for two spikes at ±μ/(2γ) along x_1, for each μ.
ResidualDecayReport residual_decay(const Problem& problem, const std::vector<double>& mus);

struct StabilityPoint {
  double mu = 0.0;
  double rhs_star = 0.0;
  double correction_star = 0.0;
  double ratio = 0.0;
  double orthogonality = 0.0;
};

struct StabilityReport {
  std::vector<StabilityPoint> points;
  /// max ratio / min ratio.
  double spread = 0.0;
};

/// Projected solves for a fixed smooth random h (scaled to ||h||_* = 1) at two
/// spikes ±μ/(2γ) for each μ.
StabilityReport linear_stability(const Problem& problem, const std::vector<double>& mus,
                                 std::uint64_t seed);

/// Two spikes at ±μ/(2γ) along x_1.
Configuration symmetric_pair(int dim, double mu, double gamma);

nlohmann::json to_json(const ReducedEnergyReport& r);
nlohmann::json to_json(const InteractionReport& r);
nlohmann::json to_json(const ResidualDecayReport& r);
nlohmann::json to_json(const MultiplierCheck& r);
nlohmann::json to_json(const IncrementReport& r);
nlohmann::json to_json(const StabilityReport& r);

}  // namespace lsr
