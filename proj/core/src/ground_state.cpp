#include "lsr/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "lsr/error.hpp"

namespace lsr {

namespace {

constexpr double kTailStartFraction = 1e-3;
constexpr double kTailFitEndFraction = 1e-4;
constexpr double kPi = 3.14159265358979323846;

struct State {
  double w;
  double p;  // w'
};

State rhs(int dim, double r, const State& s) {
  // At r = 0 the term (N-1)/r w' tends to (N-1) w''(0), hence w''(0) = (w - w^3)/N.
  const double source = s.w - s.w * s.w * s.w;
  if (r <= 0.0) return {s.p, source / dim};
  return {s.p, -(dim - 1) / r * s.p + source};
}

State rk4_step(int dim, double r, const State& s, double dr) {
  const State k1 = rhs(dim, r, s);
  const State k2 = rhs(dim, r + 0.5 * dr, {s.w + 0.5 * dr * k1.w, s.p + 0.5 * dr * k1.p});
  const State k3 = rhs(dim, r + 0.5 * dr, {s.w + 0.5 * dr * k2.w, s.p + 0.5 * dr * k2.p});
  const State k4 = rhs(dim, r + dr, {s.w + dr * k3.w, s.p + dr * k3.p});
  return {s.w + dr / 6.0 * (k1.w + 2 * k2.w + 2 * k3.w + k4.w),
          s.p + dr / 6.0 * (k1.p + 2 * k2.p + 2 * k3.p + k4.p)};
}

enum class Outcome { overshoot, undershoot, survived };

struct Trajectory {
  Outcome outcome = Outcome::survived;
  std::vector<State> samples;  // recorded until the first event
};

Trajectory shoot(int dim, double center, const ShootingOptions& opt, bool record) {
  const double dr_sample = opt.r_max / (opt.samples - 1);
  const double dr = dr_sample / opt.substeps;
  Trajectory traj;
  State s{center, 0.0};
  if (record) traj.samples.push_back(s);
  for (int i = 1; i < opt.samples; ++i) {
    for (int k = 0; k < opt.substeps; ++k) {
      const double r = (i - 1) * dr_sample + k * dr;
      s = rk4_step(dim, r, s, dr);
      if (s.w <= 0.0) {
        traj.outcome = Outcome::overshoot;
        return traj;
      }
      if (s.p > 0.0) {
        traj.outcome = Outcome::undershoot;
        return traj;
      }
    }
    if (record) traj.samples.push_back(s);
  }
  return traj;
}

// Sixth-order central second difference on uniform samples with even
// extension across r = 0.
double second_difference(const std::vector<double>& v, std::size_t i, double h) {
  static constexpr double c[4] = {-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0};
  auto at = [&](long j) { return v[static_cast<std::size_t>(std::labs(j))]; };
  const long ii = static_cast<long>(i);
  double acc = c[0] * at(ii);
  for (long k = 1; k <= 3; ++k) acc += c[k] * (at(ii + k) + at(ii - k));
  return acc / (h * h);
}

}  // namespace

double tail_shape(int dim, double r) {
  switch (dim) {
    case 1: return std::exp(-r);
    case 2: return std::sqrt(2.0 / kPi) * std::cyl_bessel_k(0.0, r);
    default: return std::exp(-r) / r;
  }
}

double tail_shape_derivative(int dim, double r) {
  switch (dim) {
    case 1: return -std::exp(-r);
    case 2: return -std::sqrt(2.0 / kPi) * std::cyl_bessel_k(1.0, r);
    default: return -std::exp(-r) * (1.0 / r + 1.0 / (r * r));
  }
}

double sech_reference(double r) { return std::sqrt(2.0) / std::cosh(r); }

double fit_tail_constant(const ProfileSamples& samples) {
  if (samples.values.empty() || samples.values.size() != samples.radii.size())
    throw DomainError("tail fit needs matching, nonempty radii and values");
  const double w0 = samples.values.front();
  const double hi = kTailStartFraction * w0;
  const double lo = kTailFitEndFraction * w0;
  const bool reaches = std::any_of(samples.values.begin(), samples.values.end(),
                                   [&](double w) { return w < lo; });
  if (!reaches) {
    const double last = samples.values.back();
    const double needed = samples.radii.back() + std::log(std::max(last, lo) / lo) + 1.0;
    std::ostringstream msg;
    msg << "tail fit needs samples with w < 1e-4 w(0); extend r_max to at least " << needed;
    throw DomainError(msg.str());
  }
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < samples.values.size(); ++i) {
    const double w = samples.values[i];
    const double r = samples.radii[i];
    if (w < lo) break;
    if (w >= hi || r <= 0.0) continue;
    sum += std::log(w) - std::log(tail_shape(samples.dim, r));
    ++count;
  }
  if (count == 0) throw DomainError("tail fit window [1e-4, 1e-3] w(0) contains no samples");
  return std::exp(sum / count);
}

GroundState::GroundState(int dim, std::vector<double> radii, std::vector<double> values,
                         std::vector<double> slopes, double tail_constant, double match_radius,
                         double fitted_tail_constant, double ode_residual)
    : dim_(dim),
      radii_(std::move(radii)),
      values_(std::move(values)),
      slopes_(std::move(slopes)),
      step_(radii_.size() > 1 ? radii_[1] - radii_[0] : 1.0),
      tail_constant_(tail_constant),
      fitted_tail_constant_(fitted_tail_constant),
      match_radius_(match_radius),
      ode_residual_(ode_residual) {}

double GroundState::curvature(std::size_t i) const {
  const double w = values_[i];
  const double source = w - w * w * w;
  if (i == 0) return source / dim_;
  return -(dim_ - 1) / radii_[i] * slopes_[i] + source;
}

double GroundState::tail_value(double r) const { return tail_constant_ * tail_shape(dim_, r); }

double GroundState::tail_derivative(double r) const {
  return tail_constant_ * tail_shape_derivative(dim_, r);
}

double GroundState::value(double r) const {
  r = std::abs(r);
  if (r >= radii_.back()) return tail_value(r);
  const auto i = std::min(static_cast<std::size_t>(r / step_), radii_.size() - 2);
  const double h = step_;
  const double t = (r - radii_[i]) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
  const double h3 = 10 * t3 - 15 * t4 + 6 * t5;
  const double h4 = -4 * t3 + 7 * t4 - 3 * t5;
  const double h5 = 0.5 * (t3 - 2 * t4 + t5);
  return h0 * values_[i] + h1 * h * slopes_[i] + h2 * h * h * curvature(i) +
         h3 * values_[i + 1] + h4 * h * slopes_[i + 1] + h5 * h * h * curvature(i + 1);
}

double GroundState::derivative(double r) const {
  r = std::abs(r);
  if (r >= radii_.back()) return tail_derivative(r);
  const auto i = std::min(static_cast<std::size_t>(r / step_), radii_.size() - 2);
  const double h = step_;
  const double t = (r - radii_[i]) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  const double d0 = -30 * t2 + 60 * t3 - 30 * t4;
  const double d1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
  const double d2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4);
  const double d3 = 30 * t2 - 60 * t3 + 30 * t4;
  const double d4 = -12 * t2 + 28 * t3 - 15 * t4;
  const double d5 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);
  return (d0 * values_[i] + d1 * h * slopes_[i] + d2 * h * h * curvature(i) +
          d3 * values_[i + 1] + d4 * h * slopes_[i + 1] + d5 * h * h * curvature(i + 1)) /
         h;
}

double eval_profile(const GroundState& gs, double r) { return gs.value(r); }

GroundState solve_ground_state(int dim, double tol, const ShootingOptions& opt) {
  if (dim < 1 || dim > 3) throw DomainError("ground state dimension must be 1, 2 or 3");
  if (!(tol > 0.0) || tol > 1e-4) throw DomainError("ground state tolerance must lie in (0, 1e-4]");
  if (opt.samples < 16 || opt.substeps < 1 || !(opt.r_max > 0.0))
    throw DomainError("invalid shooting options");

  // Bracket the shooting parameter: undershoot turns back up, overshoot crosses zero.
  double lo = 1.0;
  double hi = 2.0;
  for (int k = 0; shoot(dim, hi, opt, false).outcome != Outcome::overshoot; ++k) {
    if (k > 10) throw ShootingFailure("could not bracket w(0) from above", lo, hi);
    lo = hi;
    hi *= 2.0;
  }
  int it = 0;
  for (; it < opt.max_bisections && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi;
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const Outcome o = shoot(dim, mid, opt, false).outcome;
    if (o == Outcome::overshoot)
      hi = mid;
    else
      lo = mid;
  }
  if (it >= opt.max_bisections) throw ShootingFailure("shooting bisection did not converge", lo, hi);

  const Trajectory traj = shoot(dim, lo, opt, true);
  const double dr = opt.r_max / (opt.samples - 1);
  const double w0 = traj.samples.front().w;

  std::vector<double> radii(static_cast<std::size_t>(opt.samples));
  for (std::size_t i = 0; i < radii.size(); ++i) radii[i] = static_cast<double>(i) * dr;

  std::size_t tail_idx = 0, fit_end = 0;
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    if (tail_idx == 0 && traj.samples[i].w < kTailStartFraction * w0) tail_idx = i;
    if (traj.samples[i].w < kTailFitEndFraction * w0) {
      fit_end = i;
      break;
    }
  }
  if (tail_idx == 0 || fit_end == 0) {
    std::ostringstream msg;
    msg << "shooting trajectory does not reach w < 1e-4 w(0) before r = "
        << static_cast<double>(traj.samples.size() - 1) * dr << "; increase r_max";
    throw ShootingFailure(msg.str(), lo, hi);
  }

  ProfileSamples fit_samples{dim, {}, {}};
  for (std::size_t i = 0; i <= fit_end; ++i) {
    fit_samples.radii.push_back(radii[i]);
    fit_samples.values.push_back(traj.samples[i].w);
  }
  const double A_fit = fit_tail_constant(fit_samples);

  // Beyond the match radius the profile comes from integrating the full ODE
  // inward from r_max, started on the decaying branch A s(r). A is tuned so
  // the inward branch meets the shooting trajectory at the match radius.
  const std::size_t last = radii.size() - 1;
  const double h_in = -dr / opt.substeps;
  auto inward = [&](double A) {
    std::vector<State> out(radii.size());
    State st{A * tail_shape(dim, radii[last]), A * tail_shape_derivative(dim, radii[last])};
    out[last] = st;
    for (std::size_t i = last; i > tail_idx; --i) {
      for (int k = 0; k < opt.substeps; ++k) st = rk4_step(dim, radii[i] + k * h_in, st, h_in);
      out[i - 1] = st;
    }
    return out;
  };
  const double target = traj.samples[tail_idx].w;
  double a0 = A_fit, a1 = A_fit * (1.0 + 1e-6);
  double f0 = inward(a0)[tail_idx].w - target;
  double f1 = inward(a1)[tail_idx].w - target;
  for (int k = 0; k < 20 && f1 != f0 && std::abs(f1) > 1e-15 * target; ++k) {
    const double a2 = a1 - f1 * (a1 - a0) / (f1 - f0);
    a0 = a1;
    f0 = f1;
    a1 = a2;
    f1 = inward(a1)[tail_idx].w - target;
  }
  const double A = a1;
  if (!(std::abs(f1) <= 1e-10 * target))
    throw ShootingFailure("inward tail integration could not be matched to the trajectory", lo, hi);
  const std::vector<State> tail = inward(A);

  std::vector<double> values(radii.size()), slopes(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const State& st = i < tail_idx ? traj.samples[i] : tail[i];
    values[i] = st.w;
    slopes[i] = st.p;
  }

  double residual = 0.0;
  for (std::size_t i = 0; i + 3 < radii.size(); ++i) {
    const double w = values[i];
    const double wpp = second_difference(values, i, dr);
    const double drift = i == 0 ? (dim - 1) * wpp : (dim - 1) / radii[i] * slopes[i];
    residual = std::max(residual, std::abs(wpp + drift - w + w * w * w));
  }
  if (residual > tol) {
    std::ostringstream msg;
    msg << "ground-state ODE residual " << residual << " exceeds tolerance " << tol;
    throw ShootingFailure(msg.str(), lo, hi);
  }

  return GroundState(dim, std::move(radii), std::move(values), std::move(slopes), A,
                     static_cast<double>(tail_idx) * dr, A_fit, residual);
}

double gamma_of(double beta) {
  if (!(beta < 1.0)) throw DomainError("gamma undefined: beta must be < 1");
  return std::sqrt(1.0 - beta);
}

BlockProfile::BlockProfile(std::shared_ptr<const GroundState> gs, double gamma)
    : gs_(std::move(gs)), gamma_(gamma) {
  if (!gs_) throw DomainError("block profile needs a ground state");
}

double BlockProfile::partial(const Point& x, const Point& center, int k) const {
  Point d{x[0] - center[0], x[1] - center[1], x[2] - center[2]};
  const double r = norm(d);
  if (r == 0.0) return 0.0;
  return radial_derivative(r) * d[static_cast<std::size_t>(k)] / r;
}

BlockProfile build_block(std::shared_ptr<const GroundState> gs, double beta) {
  return BlockProfile(std::move(gs), gamma_of(beta));
}

void write_profile_csv(std::ostream& out, const GroundState& gs) {
  out << "r,w\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < gs.radii().size(); ++i)
    out << gs.radii()[i] << ',' << gs.values()[i] << '\n';
}

}  // namespace lsr
