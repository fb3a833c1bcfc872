#pragma once

#include <vector>

#include "lsr/configuration.hpp"
#include "lsr/field.hpp"
#include "lsr/ground_state.hpp"

namespace lsr {

/// Multi-bump ansatz u = v = Σ_j U(x - P_j). Throws TruncationError when a
/// center sits closer than 15/γ to the box boundary.
FieldPair assemble_ansatz(const Configuration& c, const BlockProfile& block, const Grid& grid);

/// Plateau radii of the cutoff ζ_j: 1 inside (μ-1)/(2γ), 0 beyond μ²/(2γ(μ+1)).
struct CutoffRadii {
  double inner;
  double outer;
};
CutoffRadii cutoff_radii(double mu, double gamma);

/// ζ_j(x) with a C² quintic smoothstep across the transition annulus.
/// Throws DomainError when μ <= 2.
double cutoff_zeta(const Point& x, const Point& center, double mu, double gamma);

/// D_jk = (∂U_{P_j}/∂x_k ζ_j, ∂V_{P_j}/∂x_k ζ_j), ordered j-major (index j·N + k).
std::vector<FieldPair> kernel_basis(const Configuration& c, const BlockProfile& block,
                                    const Grid& grid);

/// Translation modes (∂U_{P_j}/∂x_k, ∂V_{P_j}/∂x_k) without the cutoff.
std::vector<FieldPair> translation_modes(const Configuration& c, const BlockProfile& block,
                                         const Grid& grid);

}  // namespace lsr
