#include "lsr/cli/run.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lsr/error.hpp"
#include "lsr/ground_state.hpp"
#include "lsr/spectrum.hpp"

namespace lsr::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

/// Collects the artifacts of one run.
class Session {
 public:
  Session(const RunConfig& config, const RunOptions& options)
      : config_(config), options_(options), dir_(config.output_dir) {
    fs::create_directories(dir_);
    log_.open(dir_ / "log.jsonl", std::ios::trunc);
    if (!log_) throw ConfigError("cannot write into output directory '" + config.output_dir + "'");
  }

  void log(const json& event) {
    log_ << event.dump() << '\n';
    if (options_.verbose) std::cerr << event.dump() << '\n';
  }

  void note(const std::string& message) { log({{"event", "note"}, {"message", message}}); }

  std::ofstream open(const std::string& name) {
    std::ofstream out(dir_ / name, std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + (dir_ / name).string() + "'");
    artifacts_.push_back(name);
    return out;
  }

  void finish(json inputs, json outputs) {
    artifacts_.push_back("log.jsonl");
    json manifest = {{"tool", "lsr"},
                     {"command", to_string(config_.command)},
                     {"config", to_json(config_)},
                     {"inputs", std::move(inputs)},
                     {"outputs", std::move(outputs)},
                     {"artifacts", artifacts_},
                     {"status", "ok"}};
    std::ofstream out(dir_ / "manifest.json", std::ios::trunc);
    out << std::setw(2) << manifest << '\n';
  }

 private:
  const RunConfig& config_;
  RunOptions options_;
  fs::path dir_;
  std::ofstream log_;
  std::vector<std::string> artifacts_;
};

std::shared_ptr<const GroundState> ground_state(const RunConfig& c, Session& s) {
  auto gs = std::make_shared<const GroundState>(solve_ground_state(c.dim, c.tolerances.ground_state));
  s.log({{"event", "ground_state"},
         {"dim", c.dim},
         {"w0", gs->center_value()},
         {"tail_constant", gs->tail_constant()},
         {"ode_residual", gs->ode_residual()}});
  return gs;
}

SystemParams params_of(const RunConfig& c) {
  return SystemParams::make(c.beta, c.epsilon, c.potential_p, c.potential_q);
}

/// Explicit half width, or `needed` rounded up to a whole multiple of the spacing.
Grid problem_grid(const RunConfig& c, double needed) {
  const double gamma = gamma_of(c.beta);
  double half = c.grid.half_width;
  if (half <= 0.0) half = std::ceil(needed / c.grid.spacing - 1e-9) * c.grid.spacing;
  if (half + 1e-9 < needed) {
    std::ostringstream msg;
    msg << "grid half width " << half << " is below the required " << needed;
    throw TruncationError(msg.str(), needed);
  }
  return reduction_grid(c.dim, half, c.grid.spacing, gamma, c.grid.stencil_order);
}

FixedPointOptions fixed_point_options(const RunConfig& c) {
  FixedPointOptions o;
  o.tol = c.tolerances.fixed_point;
  o.max_iter = c.tolerances.max_iterations;
  return o;
}

OptimizerOptions optimizer_options(const RunConfig& c) {
  OptimizerOptions o;
  o.restarts = c.optimizer.restarts;
  o.seed = c.seed;
  o.search_radius = c.optimizer.search_radius;
  o.simplex.max_evaluations = c.optimizer.max_evaluations;
  o.fixed_point = fixed_point_options(c);
  return o;
}

json params_json(const SystemParams& p) {
  return {{"beta", p.beta},
          {"gamma", p.gamma},
          {"epsilon", p.epsilon},
          {"potential_p", to_json(p.potential_p)},
          {"potential_q", to_json(p.potential_q)}};
}

json solution_json(const SpikeSolution& sol, const SystemParams& p, const RunConfig& c) {
  double max_c = 0.0;
  for (double m : sol.multipliers) max_c = std::max(max_c, std::abs(m));
  const MultiplierCheck check =
      multiplier_vanishing_check(sol, c.tolerances.multiplier, c.tolerances.residual);
  return {{"configuration", to_json(sol.configuration)},
          {"N", energy_J(sol.fields, p)},
          {"star_norm", sol.correction_star},
          {"multipliers", sol.multipliers},
          {"max_multiplier", max_c},
          {"iterations", sol.iterations},
          {"update_history", sol.update_history},
          {"contraction_factor", sol.contraction_factor},
          {"fixed_point_residual", sol.fixed_point_residual},
          {"ansatz_residual_star", sol.ansatz_residual_star},
          {"full_residual_star", sol.full_residual_star},
          {"positive", sol.positive},
          {"epsilon_hypothesis", sol.epsilon_hypothesis},
          {"condition_estimate", sol.condition_estimate},
          {"multiplier_check", to_json(check)}};
}

void write_fields(Session& s, const SpikeSolution& sol) {
  auto out = s.open("fields.csv");
  write_field_csv(out, sol.fields);
}

void run_ground_state(const RunConfig& c, Session& s) {
  const auto gs = ground_state(c, s);
  {
    auto out = s.open("w.csv");
    write_profile_csv(out, *gs);
  }
  json outputs = {{"w0", gs->center_value()},
                  {"tail_constant", gs->tail_constant()},
                  {"fitted_tail_constant", gs->fitted_tail_constant()},
                  {"match_radius", gs->match_radius()},
                  {"r_max", gs->r_max()},
                  {"ode_residual", gs->ode_residual()}};
  if (c.dim == 1) {
    double err = 0.0;
    for (double r = 0.0; r <= 10.0 + 1e-12; r += 1e-3)
      err = std::max(err, std::abs(gs->value(r) - sech_reference(r)));
    outputs["sech_sup_error"] = err;
  }
  s.finish({{"dim", c.dim}, {"tolerance", c.tolerances.ground_state}}, outputs);
}

void run_solve(const RunConfig& c, Session& s) {
  const auto gs = ground_state(c, s);
  const SystemParams p = params_of(c);
  const Configuration conf = initial_configuration(c);
  const Problem problem{gs, p, problem_grid(c, required_half_width(conf, p.gamma))};
  FixedPointOptions fp = fixed_point_options(c);
  fp.on_iteration = [&s](const IterationRecord& r) {
    s.log({{"event", "iteration"},
           {"iteration", r.iteration},
           {"update_star", r.update_star},
           {"correction_star", r.correction_star},
           {"max_multiplier", r.max_multiplier}});
  };
  const SpikeSolution sol = solve_nonlinear(conf, problem, fp);
  write_fields(s, sol);
  s.finish({{"params", params_json(p)},
            {"grid", grid_metadata(problem.grid)},
            {"configuration", to_json(conf)}},
           solution_json(sol, p, c));
}

void log_restarts(Session& s, int m, const OptimizationReport& r) {
  for (std::size_t i = 0; i < r.restarts.size(); ++i) {
    const auto& rec = r.restarts[i];
    s.log({{"event", "restart"},
           {"m", m},
           {"index", i},
           {"start", to_json(rec.start)},
           {"end", to_json(rec.end)},
           {"value", rec.value},
           {"evaluations", rec.evaluations},
           {"converged", rec.converged}});
  }
}

void run_optimize(const RunConfig& c, Session& s) {
  const auto gs = ground_state(c, s);
  const SystemParams p = params_of(c);
  const Configuration init = initial_configuration(c);
  // Room for the centers to move by one separation in every direction.
  const Problem problem{gs, p, problem_grid(c, required_half_width(init, p.gamma) + c.mu / p.gamma)};
  const OptimizationReport report = optimize_configuration(init.count(), problem, init,
                                                           optimizer_options(c));
  log_restarts(s, init.count(), report);
  const SpikeSolution sol =
      solve_nonlinear(report.best.configuration, problem, fixed_point_options(c));
  write_fields(s, sol);
  json outputs = to_json(report);
  outputs["solution"] = solution_json(sol, p, c);
  s.finish({{"params", params_json(p)},
            {"grid", grid_metadata(problem.grid)},
            {"initial_configuration", to_json(init)}},
           outputs);
}

void run_ladder(const RunConfig& c, Session& s) {
  const auto gs = ground_state(c, s);
  const SystemParams p = params_of(c);
  double needed = c.grid.half_width;
  if (needed <= 0.0) {
    // Far spikes march out along +x_1 one warm-start distance at a time.
    const Problem probe{gs, p, reduction_grid(c.dim, 400.0, 1.0, p.gamma)};
    const double far = far_spike_distance(probe, c.mu);
    needed = norm(c.potential_p.center) + (c.m_max - 1) * far + c.mu / p.gamma + 15.0 / p.gamma;
  }
  const Problem problem{gs, p, problem_grid(c, needed)};
  LadderOptions lo;
  lo.optimizer = optimizer_options(c);
  lo.mu = c.mu;
  const LadderReport report = energy_ladder(c.m_max, problem, lo);
  for (const auto& level : report.levels) log_restarts(s, level.m, level.optimization);
  {
    auto out = s.open("ladder.csv");
    emit_plot_data(report, PlotKind::ladder, out);
  }
  json outputs = to_json(report);
  json gaps = json::array();
  json margins = json::array();
  double previous = 0.0;
  for (const auto& l : report.levels) {
    gaps.push_back(l.gap);
    margins.push_back(l.R - previous - report.energy_I);
    previous = l.R;
  }
  outputs["gaps"] = gaps;
  outputs["margins_vs_I"] = margins;
  const SpikeSolution top =
      solve_nonlinear(report.levels.back().optimization.best.configuration, problem,
                      fixed_point_options(c));
  write_fields(s, top);
  outputs["solution"] = solution_json(top, p, c);
  s.finish({{"params", params_json(p)}, {"grid", grid_metadata(problem.grid)}, {"m_max", c.m_max}},
           outputs);
}

void run_spectrum(const RunConfig& c, Session& s) {
  const auto gs = ground_state(c, s);
  const double gamma = gamma_of(c.beta);
  const double half = c.grid.half_width > 0.0 ? c.grid.half_width : 15.0 / gamma;
  const Grid grid = Grid::make(c.dim, half, c.grid.spacing, c.grid.stencil_order);
  const int k = c.eigen_count > 0 ? c.eigen_count : c.dim + 2;
  const EigenReport eig = linearized_spectrum(c.beta, gs, grid, k);
  {
    auto out = s.open("eigenvalues.csv");
    out << "index,eigenvalue,residual\n" << std::setprecision(17);
    for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i)
      out << i << ',' << eig.eigenvalues[i] << ',' << eig.residuals[i] << '\n';
  }
  const NondegeneracyReport nd = nondegeneracy_check(c.beta, gs, grid);
  json outputs = to_json(eig);
  outputs["residuals"] = eig.residuals;
  outputs["kernel_threshold"] = eig.kernel_threshold;
  outputs["nondegeneracy"] = {{"kernel_dim", nd.kernel_dimension},
                              {"angles", nd.angles},
                              {"max_angle", nd.max_angle},
                              {"near_zero", nd.near_zero},
                              {"passed", nd.passed}};
  if (!c.sweep_betas.empty()) {
    const DegeneracySweep sw = degeneracy_sweep(c.sweep_betas, gs, grid);
    auto bracket = [](double lo, double hi) {
      return std::isnan(lo) ? json(nullptr) : json::array({lo, hi});
    };
    outputs["sweep"] = {{"betas", sw.betas},
                        {"kernel_dims", sw.kernel_dims},
                        {"nearest_extra", sw.nearest_extra},
                        {"negative_bracket", bracket(sw.negative_lo, sw.negative_hi)},
                        {"positive_bracket", bracket(sw.positive_lo, sw.positive_hi)}};
  }
  s.finish({{"beta", c.beta}, {"grid", grid_metadata(grid)}, {"k", k}}, outputs);
}

void run_diagnose(const RunConfig& c, Session& s) {
  const auto gs = ground_state(c, s);
  const SystemParams p = params_of(c);
  double mu_max = c.mu;
  for (double m : c.mus) mu_max = std::max(mu_max, m);
  const Problem problem{gs, p, problem_grid(c, mu_max / (2.0 * p.gamma) + 15.0 / p.gamma)};

  const ResidualDecayReport decay = residual_decay(problem, c.mus);
  {
    auto out = s.open("residual_decay.csv");
    emit_plot_data(decay, PlotKind::residual_decay, out);
  }
  const InteractionReport inter = interaction_sweep(*gs, p.gamma, c.separations);
  {
    auto out = s.open("interaction.csv");
    emit_plot_data(inter, PlotKind::interaction, out);
  }
  const StabilityReport stab = linear_stability(problem, c.mus, c.seed);
  s.finish({{"params", params_json(p)}, {"grid", grid_metadata(problem.grid)}},
           {{"residual_decay", to_json(decay)},
            {"interaction", to_json(inter)},
            {"stability", to_json(stab)}});
}

}  // namespace

void run(const RunConfig& config, const RunOptions& options) {
  Session session(config, options);
  session.note(std::string("command ") + to_string(config.command));
  switch (config.command) {
    case Command::ground_state: run_ground_state(config, session); break;
    case Command::solve: run_solve(config, session); break;
    case Command::optimize: run_optimize(config, session); break;
    case Command::ladder: run_ladder(config, session); break;
    case Command::spectrum: run_spectrum(config, session); break;
    case Command::diagnose: run_diagnose(config, session); break;
  }
}

int exit_code(const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  if (!err) return 3;
  switch (err->kind()) {
    case ErrorKind::config:
    case ErrorKind::domain: return 2;
    case ErrorKind::validation:
    case ErrorKind::truncation:
    case ErrorKind::grid_mismatch: return 4;
    default: return 3;
  }
}

json error_json(const std::exception& e) {
  json j = {{"status", "error"}, {"exit_code", exit_code(e)}, {"message", e.what()}};
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    j["kind"] = lsr::to_string(err->kind());
    if (const auto* x = dynamic_cast<const ContractionFailure*>(&e)) j["update_history"] = x->update_history();
    if (const auto* x = dynamic_cast<const SingularSystem*>(&e)) j["condition_estimate"] = x->condition_estimate();
    if (const auto* x = dynamic_cast<const EigensolverFailure*>(&e)) j["residuals"] = x->residuals();
    if (const auto* x = dynamic_cast<const TruncationError*>(&e)) j["required_half_width"] = x->required_half_width();
    if (const auto* x = dynamic_cast<const ShootingFailure*>(&e))
      j["bracket"] = {x->bracket_lo(), x->bracket_hi()};
  } else {
    j["kind"] = "internal";
  }
  return j;
}

}  // namespace lsr::cli
