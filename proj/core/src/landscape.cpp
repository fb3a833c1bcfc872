#include "lsr/landscape.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "lsr/ansatz.hpp"
#include "lsr/error.hpp"

namespace lsr {

namespace {

Configuration from_vector(const Eigen::VectorXd& x, const Configuration& shape) {
  Configuration c = shape;
  for (int j = 0; j < c.count(); ++j)
    for (int k = 0; k < c.dim; ++k)
      c.centers[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = x[j * c.dim + k];
  return c;
}

Eigen::VectorXd to_vector(const Configuration& c) {
  Eigen::VectorXd x(c.count() * c.dim);
  for (int j = 0; j < c.count(); ++j)
    for (int k = 0; k < c.dim; ++k)
      x[j * c.dim + k] = c.centers[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
  return x;
}

template <class Task>
void parallel_for(int count, int threads, Task&& task) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Objective of the penalized search.
class PenalizedEnergy {
 public:
  PenalizedEnergy(const Problem& problem, const Configuration& shape, double radius,
                  double penalty, double floor, const FixedPointOptions& fp)
      : problem_(problem), shape_(shape), radius_(radius), penalty_(penalty), floor_(floor), fp_(fp) {
    fp_.validate = false;
    fp_.on_iteration = nullptr;
    const double gamma = problem.params.gamma;
    required_ = shape.mu / gamma;
    disjoint_ = 2.0 * cutoff_radii(shape.mu, gamma).outer;
  }

  double operator()(const Eigen::VectorXd& x) const {
    const Configuration c = from_vector(x, shape_);
    const double box = std::max(0.0, c.max_coordinate() - radius_);
    if (box > 0.0) return floor_ - penalty_ * box * box;
    double sep = 0.0;
    if (c.count() > 1) {
      const double d = c.min_separation();
      if (d <= disjoint_) return floor_ - penalty_ * (required_ - d) * (required_ - d);
      sep = std::max(0.0, required_ - d);
    }
    try {
      const SpikeSolution s = solve_nonlinear(c, problem_, fp_);
      return energy_J(s.fields, problem_.params) - penalty_ * sep * sep;
    } catch (const Error&) {
      return floor_ - penalty_ * (1.0 + sep * sep);
    }
  }

 private:
  const Problem& problem_;
  Configuration shape_;
  double radius_;
  double penalty_;
  double floor_;
  FixedPointOptions fp_;
  double required_ = 0.0;
  double disjoint_ = 0.0;
};

}  // namespace

int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LSR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

OptimizationReport optimize_configuration(int m, const Problem& problem, const Configuration& init,
                                          const OptimizerOptions& opt) {
  if (m < 1 || init.count() != m)
    throw DomainError("optimize_configuration: init must hold exactly m centers");
  if (init.dim != problem.grid.dim) throw GridMismatch("configuration and grid dimensions differ");
  const double gamma = problem.params.gamma;
  const auto validity = validate_configuration(init, gamma);
  if (!validity.valid) throw ValidationError("optimize_configuration: init lies outside the admissible set");
  const double radius = opt.search_radius > 0.0 ? opt.search_radius
                                                : problem.grid.half_width - 15.0 / gamma;
  if (init.max_coordinate() > radius + 1e-12) {
    std::ostringstream msg;
    msg << "init center beyond the search radius " << radius;
    throw TruncationError(msg.str(), init.max_coordinate() + 15.0 / gamma);
  }

  const double start_value = energy_J(solve_nonlinear(init, problem, opt.fixed_point).fields,
                                      problem.params);
  const double floor = start_value - 1.0;
  const PenalizedEnergy objective(problem, init, radius, opt.penalty, floor, opt.fixed_point);

  // Restart seeds are drawn up front so results do not depend on scheduling.
  const int restarts = std::max(1, opt.restarts);
  std::vector<Configuration> starts{init};
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal(0.0, opt.perturbation / gamma);
  for (int r = 1; r < restarts; ++r) {
    Configuration c = init;
    for (int attempt = 0; attempt < 50; ++attempt) {
      Configuration trial = init;
      for (auto& P : trial.centers)
        for (int k = 0; k < trial.dim; ++k) P[static_cast<std::size_t>(k)] += normal(rng);
      if (validate_configuration(trial, gamma).valid && trial.max_coordinate() <= radius) {
        c = trial;
        break;
      }
    }
    starts.push_back(c);
  }

  OptimizationReport report;
  report.restarts.resize(starts.size());
  parallel_for(static_cast<int>(starts.size()), thread_count(opt.threads), [&](int i) {
    const auto& s = starts[static_cast<std::size_t>(i)];
    const SimplexResult res = maximize_simplex(objective, to_vector(s), opt.simplex);
    RestartRecord& rec = report.restarts[static_cast<std::size_t>(i)];
    rec.start = s;
    rec.end = from_vector(res.x, init);
    rec.value = res.value;
    rec.evaluations = res.evaluations;
    rec.converged = res.converged;
  });

  const double boundary_tol = 1e-3 * init.mu / gamma;
  std::size_t best = 0;
  bool all_boundary = true;
  for (std::size_t i = 0; i < report.restarts.size(); ++i) {
    auto& rec = report.restarts[i];
    const bool sep_edge =
        rec.end.count() > 1 && validate_configuration(rec.end, gamma).margin < boundary_tol;
    const bool box_edge = rec.end.max_coordinate() > radius - boundary_tol;
    rec.on_boundary = sep_edge || box_edge;
    all_boundary = all_boundary && rec.on_boundary;
    if (rec.value > report.restarts[best].value) best = i;
  }

  SimplexOptions polish = opt.simplex;
  polish.initial_step = opt.polish_step;
  const SimplexResult refined =
      maximize_simplex(objective, to_vector(report.restarts[best].end), polish);
  Configuration winner = from_vector(refined.x, init);
  if (!(refined.value >= report.restarts[best].value) || !validate_configuration(winner, gamma).valid)
    winner = report.restarts[best].end;

  ReducedEnergyOptions ro;
  ro.fixed_point = opt.fixed_point;
  ro.fixed_point.on_iteration = nullptr;
  report.best = reduced_energy(winner, problem, ro);
  report.boundary_maximizer = all_boundary;
  if (all_boundary)
    report.warnings.push_back(
        "every restart ended on the boundary of the admissible set; the potential may be too "
        "weak or mu too large for the box");
  for (const auto& rec : report.restarts)
    if (!rec.converged) {
      report.warnings.push_back("a restart stopped on its evaluation budget");
      break;
    }
  return report;
}

double far_spike_distance(const Problem& problem, double mu) {
  const double gamma = problem.params.gamma;
  const double base = 2.0 * mu / gamma;
  const double eps = problem.params.epsilon;
  if (!(eps > 0.0)) return base;
  const auto& P = problem.params.potential_p;
  const auto& gs = *problem.ground_state;
  const double limit = problem.grid.half_width;
  for (double r = 0.5; r < limit; r += 0.05)
    if (eps * std::abs(P.radial(r, gamma)) >= gamma * gs.value(gamma * r)) return std::max(base, r);
  return base;
}

double grid_single_spike_energy(const Problem& problem, double mu) {
  Problem bare = problem;
  bare.params = SystemParams::make(problem.params.beta, 0.0);
  const Configuration single{problem.grid.dim, mu, {Point{}}};
  const SpikeSolution s = solve_nonlinear(single, bare);
  return energy_J(s.fields, bare.params);
}

LadderReport energy_ladder(int m_max, const Problem& problem, const LadderOptions& opt) {
  if (m_max < 1) throw DomainError("energy_ladder: m_max must be at least 1");
  const double gamma = problem.params.gamma;
  const double mu = opt.mu;
  LadderReport report;
  report.energy_I = energy_I(problem.params.beta, *problem.ground_state);
  report.energy_I_grid = grid_single_spike_energy(problem, mu);

  Point first{};
  if (opt.start_at_potential_center) first = problem.params.potential_p.center;
  Configuration current{problem.grid.dim, mu, {first}};
  const double radius = opt.optimizer.search_radius > 0.0
                            ? opt.optimizer.search_radius
                            : problem.grid.half_width - 15.0 / gamma;
  double previous = 0.0;
  report.all_gaps_positive = true;
  for (int m = 1; m <= m_max; ++m) {
    if (m > 1) {
      const double far = far_spike_distance(problem, mu);
      double lead = -std::numeric_limits<double>::infinity();
      for (const auto& P : current.centers) lead = std::max(lead, P[0]);
      Point p{};
      p[0] = std::min(lead + far, radius - 1e-6);
      if (p[0] - lead < mu / gamma) {
        std::ostringstream msg;
        msg << "no room for spike " << m << " inside the search radius " << radius;
        throw TruncationError(msg.str(), lead + far + 15.0 / gamma);
      }
      current = current.with_center(p);
    }
    LadderLevel level;
    level.m = m;
    level.optimization = optimize_configuration(m, problem, current, opt.optimizer);
    level.R = level.optimization.best.value;
    level.gap = level.R - previous - report.energy_I_grid;
    for (const auto& w : level.optimization.warnings) {
      std::ostringstream msg;
      msg << "m = " << m << ": " << w;
      report.warnings.push_back(msg.str());
    }
    report.all_gaps_positive = report.all_gaps_positive && level.gap > 0.0;
    current = level.optimization.best.configuration;
    previous = level.R;
    report.levels.push_back(std::move(level));
  }
  return report;
}

nlohmann::json to_json(const OptimizationReport& r) {
  nlohmann::json restarts = nlohmann::json::array();
  for (const auto& rec : r.restarts)
    restarts.push_back({{"start", to_json(rec.start)},
                        {"end", to_json(rec.end)},
                        {"value", rec.value},
                        {"evaluations", rec.evaluations},
                        {"converged", rec.converged},
                        {"on_boundary", rec.on_boundary}});
  return {{"best", to_json(r.best)},
          {"restarts", restarts},
          {"boundary_maximizer", r.boundary_maximizer},
          {"warnings", r.warnings}};
}

nlohmann::json to_json(const LadderReport& r) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"m", l.m}, {"R", l.R}, {"gap", l.gap}, {"optimization", to_json(l.optimization)}});
  return {{"levels", levels},
          {"I", r.energy_I},
          {"I_grid", r.energy_I_grid},
          {"all_gaps_positive", r.all_gaps_positive},
          {"warnings", r.warnings}};
}

}  // namespace lsr
