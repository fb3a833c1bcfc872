#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "lsr/grid.hpp"

namespace lsr {

struct ShootingOptions {
  double r_max = 25.0;
  int samples = 2000;
  /// RK4 steps between consecutive sample radii.
  int substeps = 16;
  int max_bisections = 200;
};

/// Radial samples of a decaying profile, the input of the tail fit.
struct ProfileSamples {
  int dim = 1;
  std::vector<double> radii;
  std::vector<double> values;
};

/// Positive radial ground state w of  w'' + (N-1)/r w' - w + w^3 = 0.
///
/// Samples below `match_radius()` come from the shooting trajectory, samples
/// above it from integrating the ODE inward from `r_max()` on the decaying
/// branch. Between samples values use quintic Hermite interpolation (w, w',
/// and w'' taken from the ODE). Past `r_max()` the profile is A_N times the
/// decaying solution of the linearized equation, normalized so that it
/// behaves like r^{-(N-1)/2} e^{-r}.
class GroundState {
 public:
  GroundState(int dim, std::vector<double> radii, std::vector<double> values,
              std::vector<double> slopes, double tail_constant, double match_radius,
              double fitted_tail_constant, double ode_residual);

  int dim() const noexcept { return dim_; }
  double center_value() const noexcept { return values_.front(); }
  /// A_N of the inward branch, matched to the trajectory.
  double tail_constant() const noexcept { return tail_constant_; }
  /// A_N from the log-linear fit of the trajectory samples.
  double fitted_tail_constant() const noexcept { return fitted_tail_constant_; }
  /// First sample radius with w < 1e-3 w(0).
  double match_radius() const noexcept { return match_radius_; }
  double r_max() const noexcept { return radii_.back(); }
  /// Largest sixth-order finite-difference ODE residual over the samples.
  double ode_residual() const noexcept { return ode_residual_; }

  const std::vector<double>& radii() const noexcept { return radii_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& slopes() const noexcept { return slopes_; }

  double value(double r) const;
  double derivative(double r) const;

  double tail_value(double r) const;
  double tail_derivative(double r) const;

  ProfileSamples samples() const { return {dim_, radii_, values_}; }

 private:
  double curvature(std::size_t i) const;

  int dim_;
  std::vector<double> radii_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  double step_;
  double tail_constant_;
  double fitted_tail_constant_;
  double match_radius_;
  double ode_residual_;
};

/// Shooting on w(0) with bisection and RK4. Throws ShootingFailure when the
/// bracket does not close or the ODE residual exceeds `tol`, DomainError on
/// bad arguments.
GroundState solve_ground_state(int dim, double tol, const ShootingOptions& options = {});

double eval_profile(const GroundState& gs, double r);

/// Decay profile of the linearized equation -Δs + s = 0, normalized so that
/// s(r) ~ r^{-(N-1)/2} e^{-r}. Exact: e^{-r} (N=1), sqrt(2/π) K_0(r) (N=2),
/// e^{-r}/r (N=3).
double tail_shape(int dim, double r);
double tail_shape_derivative(int dim, double r);

/// Least-squares fit of log w - log s(r) over the last decade of samples
/// (w between 1e-4 and 1e-3 of w(0)); returns exp of the fitted level.
double fit_tail_constant(const ProfileSamples& samples);

/// Closed-form 1D ground state sqrt(2) sech(r). Reference only.
double sech_reference(double r);

/// Rescaled building block U(x) = V(x) = γ w(γ|x|).
class BlockProfile {
 public:
  BlockProfile(std::shared_ptr<const GroundState> gs, double gamma);

  double gamma() const noexcept { return gamma_; }
  int dim() const noexcept { return gs_->dim(); }
  const GroundState& ground_state() const noexcept { return *gs_; }

  double value(double r) const { return gamma_ * gs_->value(gamma_ * r); }
  double radial_derivative(double r) const {
    return gamma_ * gamma_ * gs_->derivative(gamma_ * r);
  }
  /// Value of U centered at `center`, evaluated at `x`.
  double at(const Point& x, const Point& center) const { return value(distance(x, center)); }
  /// ∂U(x - center)/∂x_k.
  double partial(const Point& x, const Point& center, int k) const;

 private:
  std::shared_ptr<const GroundState> gs_;
  double gamma_;
};

/// γ = sqrt(1 - β); throws DomainError when β >= 1.
double gamma_of(double beta);

BlockProfile build_block(std::shared_ptr<const GroundState> gs, double beta);

/// CSV with header "r,w" at full sample resolution.
void write_profile_csv(std::ostream& out, const GroundState& gs);

}  // namespace lsr
