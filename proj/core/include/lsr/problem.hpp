#pragma once

#include <memory>

#include "lsr/field.hpp"
#include "lsr/ground_state.hpp"

namespace lsr {

/// Everything a reduction run shares: the ground state, the system
/// parameters, the truncated grid and the *-norm exponent ν.
struct Problem {
  std::shared_ptr<const GroundState> ground_state;
  SystemParams params;
  Grid grid;
  double nu = 0.75;

  BlockProfile block() const { return BlockProfile(ground_state, params.gamma); }
};

/// Grid for reduction runs: ghosts decay like the block tail, e^{-γ r}.
inline Grid reduction_grid(int dim, double half_width, double spacing, double gamma,
                           int stencil_order = 6) {
  return Grid::make(dim, half_width, spacing, stencil_order).with_boundary_decay(gamma);
}

}  // namespace lsr
