#include "lsr/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lsr/ansatz.hpp"
#include "lsr/error.hpp"
#include "lsr/linsolve.hpp"

namespace lsr {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Index as_index(std::size_t i) { return static_cast<Eigen::Index>(i); }

bool interior_positive(const FieldPair& f) {
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    if (f.grid.on_boundary(i)) continue;
    if (!(f.u[as_index(i)] > 0.0) || !(f.v[as_index(i)] > 0.0)) return false;
  }
  return true;
}

template <class F>
double simpson(F&& f, double a, double b, int intervals) {
  if (intervals % 2) ++intervals;
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// ∫_{R^N} g(|y|) k(|y - s e_1|) dy for radial g, k, reduced to (z, ρ).
template <class G, class K>
double radial_pair_integral(int dim, G&& g, K&& k, double s, double reach) {
  if (dim == 1) {
    const double a = std::min(0.0, s) - reach, b = std::max(0.0, s) + reach;
    const int n = static_cast<int>(std::ceil((b - a) / 1e-3));
    return simpson([&](double z) { return g(std::abs(z)) * k(std::abs(z - s)); }, a, b, n);
  }
  const double a = std::min(0.0, s) - reach, b = std::max(0.0, s) + reach;
  const int nz = static_cast<int>(std::ceil((b - a) / 0.02));
  const int nr = static_cast<int>(std::ceil(reach / 0.02));
  auto slice = [&](double rho) {
    const double measure = dim == 2 ? 2.0 : 2.0 * kPi * rho;
    if (measure == 0.0) return 0.0;
    return measure * simpson(
                         [&](double z) {
                           return g(std::hypot(z, rho)) * k(std::hypot(z - s, rho));
                         },
                         a, b, nz);
  };
  return simpson(slice, 0.0, reach, nr);
}

double linear_fit_r2(const std::vector<double>& x, const std::vector<double>& y, double& slope) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  slope = sxx > 0 ? sxy / sxx : 0.0;
  return (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;
}

nlohmann::json finite_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

}  // namespace

FieldPair nonlinear_remainder(const FieldPair& f, const FieldPair& ansatz) {
  if (!(f.grid == ansatz.grid)) throw GridMismatch("nonlinear_remainder: grids differ");
  FieldPair out = FieldPair::zeros(f.grid);
  for (Eigen::Index i = 0; i < f.u.size(); ++i) {
    const double p = f.u[i], q = f.v[i];
    out.u[i] = 3.0 * ansatz.u[i] * p * p + p * p * p;
    out.v[i] = 3.0 * ansatz.v[i] * q * q + q * q * q;
  }
  return out;
}

Configuration symmetric_pair(int dim, double mu, double gamma) {
  const double half = mu / (2.0 * gamma);
  return {dim, mu, {Point{-half, 0.0, 0.0}, Point{half, 0.0, 0.0}}};
}

SpikeSolution solve_nonlinear(const Configuration& c, const Problem& problem,
                              const FixedPointOptions& opt) {
  if (c.centers.empty()) throw DomainError("solve_nonlinear needs at least one spike");
  if (c.dim != problem.grid.dim) throw GridMismatch("configuration and grid dimensions differ");
  if (!(opt.tol > 0.0) || opt.max_iter < 1) throw DomainError("bad fixed-point options");
  const SystemParams& p = problem.params;
  const double gamma = p.gamma;
  if (opt.validate) {
    const auto v = validate_configuration(c, gamma);
    if (!v.valid) {
      std::ostringstream msg;
      msg << "configuration outside the admissible set: min separation " << v.min_separation
          << " < " << v.required_separation;
      throw ValidationError(msg.str());
    }
  }

  const BlockProfile block = problem.block();
  SpikeSolution s;
  s.configuration = c;
  s.ansatz = assemble_ansatz(c, block, problem.grid);
  auto basis = kernel_basis(c, block, problem.grid);
  for (const auto& d : basis) s.basis_norms.push_back(std::sqrt(inner(d, d)));
  const ScalarField weight = weight_F(problem.grid, c, gamma, problem.nu);
  ProjectedSolver solver(s.ansatz, std::move(basis), p, weight);
  s.condition_estimate = solver.condition_estimate();

  const FieldPair G0 = residual_G(s.ansatz, p);
  s.ansatz_residual_star = star_norm(G0, weight);
  const FieldPair minus_G = -1.0 * G0;

  FieldPair phi = FieldPair::zeros(problem.grid);
  bool converged = false;
  for (int it = 1; it <= opt.max_iter; ++it) {
    const ProjectedSolution step = solver.solve(minus_G - nonlinear_remainder(phi, s.ansatz));
    const double update = star_norm(step.correction - phi, weight);
    s.update_history.push_back(update);
    if (!std::isfinite(update) || !step.correction.all_finite())
      throw ContractionFailure("fixed-point iterate is not finite", s.update_history);
    phi = step.correction;
    s.multipliers = step.multipliers;
    s.iterations = it;
    if (opt.on_iteration) {
      IterationRecord rec;
      rec.iteration = it;
      rec.update_star = update;
      rec.correction_star = star_norm(phi, weight);
      for (double m : s.multipliers) rec.max_multiplier = std::max(rec.max_multiplier, std::abs(m));
      opt.on_iteration(rec);
    }
    if (update < opt.tol) {
      converged = true;
      break;
    }
    const std::size_t k = s.update_history.size();
    if (k >= 3 && update >= s.update_history[k - 2]) {
      std::ostringstream msg;
      msg << "fixed-point updates stopped shrinking at iteration " << it
          << "; mu may be too small, epsilon too large or beta near a degenerate value";
      throw ContractionFailure(msg.str(), s.update_history);
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "fixed-point iteration did not reach " << opt.tol << " in " << opt.max_iter
        << " iterations";
    throw ContractionFailure(msg.str(), s.update_history);
  }
  for (std::size_t i = 2; i < s.update_history.size(); ++i)
    s.contraction_factor =
        std::max(s.contraction_factor, s.update_history[i] / s.update_history[i - 1]);

  s.correction = phi;
  s.correction_star = star_norm(phi, weight);
  const ProjectedSolution again = solver.solve(minus_G - nonlinear_remainder(phi, s.ansatz));
  s.fixed_point_residual = star_norm(again.correction - phi, weight);
  s.fields = s.ansatz + phi;
  s.full_residual_star = star_norm(residual_G(s.fields, p), weight);
  s.positive = interior_positive(s.fields);
  s.epsilon_hypothesis = p.epsilon < std::exp(-2.0 * c.mu);
  return s;
}

ReducedEnergyReport reduced_energy(const Configuration& c, const Problem& problem,
                                   const ReducedEnergyOptions& opt) {
  const SpikeSolution sol = solve_nonlinear(c, problem, opt.fixed_point);
  ReducedEnergyReport r;
  r.configuration = c;
  r.value = energy_J(sol.fields, problem.params);
  r.energy_I = energy_I(problem.params.beta, *problem.ground_state);
  r.correction_star = sol.correction_star;
  r.iterations = sol.iterations;
  for (double m : sol.multipliers) r.max_multiplier = std::max(r.max_multiplier, std::abs(m));
  r.boundary_distance = c.count() > 1 ? validate_configuration(c, problem.params.gamma).margin
                                      : std::numeric_limits<double>::infinity();
  if (opt.gradient) {
    FixedPointOptions fp = opt.fixed_point;
    fp.validate = false;
    fp.on_iteration = nullptr;
    double sq = 0.0;
    for (int j = 0; j < c.count(); ++j)
      for (int k = 0; k < c.dim; ++k) {
        Configuration plus = c, minus = c;
        plus.centers[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] += opt.fd_step;
        minus.centers[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] -= opt.fd_step;
        const double np = energy_J(solve_nonlinear(plus, problem, fp).fields, problem.params);
        const double nm = energy_J(solve_nonlinear(minus, problem, fp).fields, problem.params);
        const double g = (np - nm) / (2.0 * opt.fd_step);
        r.gradient.push_back(g);
        sq += g * g;
      }
    r.gradient_norm = std::sqrt(sq);
  }
  return r;
}

double gamma1_constant(const GroundState& gs) {
  const int N = gs.dim();
  const double reach = 40.0;
  if (N == 1)
    return simpson([&](double x) { return std::pow(gs.value(std::abs(x)), 3) * std::exp(-x); },
                   -reach, reach, 80000);
  // Axisymmetric about x_1: ∫ w³(|y|) e^{-y_1} dy.
  const double R = 30.0;
  const int nz = static_cast<int>(2.0 * R / 0.02), nr = static_cast<int>(R / 0.02);
  auto slice = [&](double rho) {
    const double measure = N == 2 ? 2.0 : 2.0 * kPi * rho;
    if (measure == 0.0) return 0.0;
    return measure *
           simpson([&](double z) { return std::pow(gs.value(std::hypot(z, rho)), 3) * std::exp(-z); },
                   -R, R, nz);
  };
  return simpson(slice, 0.0, R, nr);
}

double interaction_integral(const GroundState& gs, double gamma, double d) {
  if (!(gamma > 0.0)) throw DomainError("interaction_integral: gamma must be positive");
  const int N = gs.dim();
  const double reach = N == 1 ? 40.0 : 30.0;
  const double scaled = radial_pair_integral(
      N, [&](double r) { return std::pow(gs.value(r), 3); }, [&](double r) { return gs.value(r); },
      gamma * d, reach);
  return scaled / std::pow(gamma, N);
}

InteractionReport interaction_sweep(const GroundState& gs, double gamma,
                                    const std::vector<double>& separations) {
  InteractionReport r;
  r.gamma = gamma;
  r.gamma1 = gamma1_constant(gs);
  for (double d : separations) {
    InteractionPoint pt;
    pt.d = d;
    pt.integral = interaction_integral(gs, gamma, d);
    pt.ratio = std::pow(gamma, gs.dim()) * pt.integral / gs.value(gamma * d);
    pt.ratio_to_gamma1 = pt.ratio / r.gamma1;
    r.points.push_back(pt);
  }
  return r;
}

double interaction_energy_estimate(const GroundState& gs, double beta, double d) {
  const double gamma = gamma_of(beta);
  return -2.0 * std::pow(gamma, 4 - gs.dim()) * gamma1_constant(gs) * gs.value(gamma * d);
}

MultiplierCheck multiplier_vanishing_check(const SpikeSolution& sol, double multiplier_tol,
                                           double residual_tol) {
  MultiplierCheck r;
  r.multiplier_tol = multiplier_tol;
  r.residual_tol = residual_tol;
  for (std::size_t i = 0; i < sol.multipliers.size(); ++i) {
    const double c = std::abs(sol.multipliers[i]);
    r.max_multiplier = std::max(r.max_multiplier, c);
    const double scale = i < sol.basis_norms.size() ? sol.basis_norms[i] : 1.0;
    r.max_scaled_multiplier = std::max(r.max_scaled_multiplier, c * scale);
  }
  r.full_residual_star = sol.full_residual_star;
  r.passed = r.max_scaled_multiplier <= multiplier_tol && r.full_residual_star <= residual_tol;
  return r;
}

IncrementReport increment_diagnostics(const Configuration& c, const Point& p_new,
                                      const Problem& problem, const FixedPointOptions& opt) {
  const Configuration grown = c.with_center(p_new);
  const SpikeSolution before = solve_nonlinear(c, problem, opt);
  const SpikeSolution after = solve_nonlinear(grown, problem, opt);
  const Configuration lone{c.dim, c.mu, {p_new}};
  const FieldPair single = assemble_ansatz(lone, problem.block(), problem.grid);
  const FieldPair inc = after.fields - before.fields - single;

  IncrementReport r;
  r.new_center = p_new;
  r.distance = std::numeric_limits<double>::infinity();
  const double gamma = problem.params.gamma;
  for (const auto& P : c.centers) {
    const double d = distance(P, p_new);
    r.distance = std::min(r.distance, d);
    r.bound_shape += problem.ground_state->value(gamma * d);
  }
  const double h1 = h1_norm(inc);
  r.h1_norm_squared = h1 * h1;
  return r;
}

ResidualDecayReport residual_decay(const Problem& problem, const std::vector<double>& mus) {
  if (mus.size() < 2) throw DomainError("residual_decay needs at least two values of mu");
  ResidualDecayReport r;
  const double gamma = problem.params.gamma;
  const BlockProfile block = problem.block();
  std::vector<double> xs, ys;
  for (double mu : mus) {
    const Configuration c = symmetric_pair(problem.grid.dim, mu, gamma);
    const FieldPair ansatz = assemble_ansatz(c, block, problem.grid);
    const double s = star_norm(residual_G(ansatz, problem.params), c, gamma, problem.nu);
    r.points.push_back({mu, s, std::log(s)});
    xs.push_back(mu);
    ys.push_back(std::log(s));
  }
  r.r_squared = linear_fit_r2(xs, ys, r.slope);
  r.strictly_decreasing = true;
  for (std::size_t i = 1; i < r.points.size(); ++i)
    if (!(r.points[i].star_norm < r.points[i - 1].star_norm)) r.strictly_decreasing = false;
  return r;
}

StabilityReport linear_stability(const Problem& problem, const std::vector<double>& mus,
                                 std::uint64_t seed) {
  const int N = problem.grid.dim;
  const double gamma = problem.params.gamma;
  // Smooth random profile g(x) = Σ a_q cos(k_q · x + θ_q), one per component.
  struct Mode {
    double a;
    Point k;
    double theta;
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Mode> modes[2];
  for (auto& list : modes)
    for (int q = 0; q < 6; ++q) {
      Mode m{unit(rng), {}, kPi * unit(rng)};
      for (int a = 0; a < N; ++a) m.k[static_cast<std::size_t>(a)] = 1.5 * unit(rng);
      list.push_back(m);
    }
  auto g = [&](int comp, const Point& x) {
    double s = 0.0;
    for (const auto& m : modes[comp])
      s += m.a * std::cos(m.k[0] * x[0] + m.k[1] * x[1] + m.k[2] * x[2] + m.theta);
    return s;
  };

  StabilityReport r;
  const BlockProfile block = problem.block();
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double mu : mus) {
    const Configuration c = symmetric_pair(N, mu, gamma);
    const ScalarField weight = weight_F(problem.grid, c, gamma, problem.nu);
    FieldPair h = FieldPair::zeros(problem.grid);
    for (std::size_t i = 0; i < problem.grid.size(); ++i) {
      const Point x = problem.grid.point(i);
      h.u[as_index(i)] = weight[as_index(i)] * g(0, x);
      h.v[as_index(i)] = weight[as_index(i)] * g(1, x);
    }
    h *= 1.0 / star_norm(h, weight);
    const FieldPair ansatz = assemble_ansatz(c, block, problem.grid);
    ProjectedSolver solver(ansatz, kernel_basis(c, block, problem.grid), problem.params, weight);
    const ProjectedSolution sol = solver.solve(h);
    r.points.push_back({mu, sol.rhs_star, sol.correction_star, sol.stability_ratio, sol.orthogonality});
    lo = std::min(lo, sol.stability_ratio);
    hi = std::max(hi, sol.stability_ratio);
  }
  r.spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return r;
}

nlohmann::json to_json(const ReducedEnergyReport& r) {
  return {{"configuration", to_json(r.configuration)},
          {"N", r.value},
          {"I", r.energy_I},
          {"gradient", r.gradient},
          {"gradient_norm", r.gradient_norm},
          {"boundary_distance", finite_or_null(r.boundary_distance)},
          {"max_multiplier", r.max_multiplier},
          {"correction_star", r.correction_star},
          {"iterations", r.iterations}};
}

nlohmann::json to_json(const InteractionReport& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points)
    pts.push_back({{"d", p.d}, {"integral", p.integral}, {"ratio", p.ratio},
                   {"ratio_to_gamma1", p.ratio_to_gamma1}});
  return {{"gamma", r.gamma}, {"gamma1", r.gamma1}, {"points", pts}};
}

nlohmann::json to_json(const ResidualDecayReport& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points)
    pts.push_back({{"mu", p.mu}, {"star_norm", p.star_norm}, {"log_star_norm", p.log_star_norm}});
  return {{"points", pts}, {"slope", r.slope}, {"r_squared", r.r_squared},
          {"strictly_decreasing", r.strictly_decreasing}};
}

nlohmann::json to_json(const MultiplierCheck& r) {
  return {{"max_multiplier", r.max_multiplier},
          {"max_scaled_multiplier", r.max_scaled_multiplier},
          {"full_residual_star", r.full_residual_star},
          {"multiplier_tol", r.multiplier_tol},
          {"residual_tol", r.residual_tol},
          {"passed", r.passed}};
}

nlohmann::json to_json(const IncrementReport& r) {
  return {{"new_center", r.new_center},
          {"distance", r.distance},
          {"h1_norm_squared", r.h1_norm_squared},
          {"bound_shape", r.bound_shape}};
}

nlohmann::json to_json(const StabilityReport& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points)
    pts.push_back({{"mu", p.mu}, {"rhs_star", p.rhs_star}, {"correction_star", p.correction_star},
                   {"ratio", p.ratio}, {"orthogonality", p.orthogonality}});
  return {{"points", pts}, {"spread", r.spread}};
}

}  // namespace lsr
