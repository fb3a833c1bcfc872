#pragma once

#include <iosfwd>

#include <Eigen/SparseCore>

#include "lsr/configuration.hpp"
#include "lsr/grid.hpp"
#include "lsr/ground_state.hpp"
#include "lsr/potential.hpp"

namespace lsr {

/// A pair of real fields (u, v) sharing one grid.
struct FieldPair {
  Grid grid;
  ScalarField u;
  ScalarField v;

  static FieldPair zeros(const Grid& grid);

  FieldPair& operator+=(const FieldPair& o);
  FieldPair& operator-=(const FieldPair& o);
  FieldPair& operator*=(double s);
  friend FieldPair operator+(FieldPair a, const FieldPair& b) { return a += b; }
  friend FieldPair operator-(FieldPair a, const FieldPair& b) { return a -= b; }
  friend FieldPair operator*(double s, FieldPair a) { return a *= s; }

  bool all_finite() const;
  /// Swap the two components.
  FieldPair swapped() const { return {grid, v, u}; }
};

/// Coupling β, its scale γ = sqrt(1-β), the potential strength ε and the two
/// potentials of the system.
struct SystemParams {
  double beta = 0.0;
  double gamma = 1.0;
  double epsilon = 0.0;
  PotentialSpec potential_p;
  PotentialSpec potential_q;

  static SystemParams make(double beta, double epsilon, PotentialSpec p = {},
                           PotentialSpec q = {});
  /// True when the ε-potentials are identical, so the system is symmetric under u <-> v.
  bool symmetric() const { return potential_p == potential_q; }
};

/// Second-derivative central stencil weights c_0..c_r for the given order.
std::vector<double> stencil_weights(int order);

ScalarField laplacian(const ScalarField& f, const Grid& grid);
Eigen::SparseMatrix<double> laplacian_matrix(const Grid& grid);

double integrate(const ScalarField& f, const Grid& grid);
/// ⟨f, g⟩ = ∫ (f_1 g_1 + f_2 g_2), trapezoidal. Throws GridMismatch.
double inner(const FieldPair& f, const FieldPair& g);
/// ||u||_{H^1} + ||v||_{H^1} with central differences (one-sided at the boundary).
double h1_norm(const FieldPair& f);

/// Energy functional J. The Dirichlet term is the discrete form -∫ u Δ_h u,
/// so with zero ghosts the first variation of J is exactly -G.
double energy_J(const FieldPair& f, const SystemParams& p);
FieldPair residual_G(const FieldPair& f, const SystemParams& p);

/// F(x) = Σ_j exp(-νγ|x - P_j|).
ScalarField weight_F(const Grid& grid, const Configuration& c, double gamma, double nu);
double star_norm(const FieldPair& f, const ScalarField& weight);
double star_norm(const FieldPair& f, const Configuration& c, double gamma, double nu = 0.75);

/// Energy I(U,V) of the block by radial quadrature.
double energy_I(double beta, const GroundState& gs);

/// CSV "x[,y[,z]],u,v".
void write_field_csv(std::ostream& out, const FieldPair& f);

}  // namespace lsr
