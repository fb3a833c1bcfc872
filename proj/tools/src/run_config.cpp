#include "lsr/cli/run_config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "lsr/error.hpp"
#include "lsr/ground_state.hpp"

namespace lsr::cli {

namespace {

using nlohmann::json;

constexpr struct {
  Command command;
  const char* name;
} kCommands[] = {
    {Command::ground_state, "ground-state"}, {Command::solve, "solve"},
    {Command::optimize, "optimize"},         {Command::ladder, "ladder"},
    {Command::spectrum, "spectrum"},         {Command::diagnose, "diagnose"},
};

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& item : j.items())
    if (!known.count(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

const char* to_string(Command c) {
  for (const auto& e : kCommands)
    if (e.command == c) return e.name;
  return "?";
}

Command command_from_string(const std::string& name) {
  for (const auto& e : kCommands)
    if (name == e.name) return e.command;
  throw ConfigError("unknown command '" + name + "'");
}

RunConfig parse_run_config(const json& j) {
  RunConfig c;
  try {
    reject_unknown(j,
                   {"command", "dim", "beta", "epsilon", "potential_p", "potential_q", "grid", "mu",
                    "configuration", "configuration_file", "m", "init", "init_spacing",
                    "tolerances", "optimizer", "m_max", "mus", "separations", "eigen_count",
                    "sweep_betas", "output_dir", "seed"},
                   "run config");
    if (j.contains("command")) c.command = command_from_string(j.at("command").get<std::string>());
    read(j, "dim", c.dim);
    read(j, "beta", c.beta);
    read(j, "epsilon", c.epsilon);
    if (j.contains("potential_p")) c.potential_p = potential_from_json(j.at("potential_p"));
    if (j.contains("potential_q")) c.potential_q = potential_from_json(j.at("potential_q"));
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      reject_unknown(g, {"half_width", "spacing", "stencil_order"}, "grid");
      read(g, "half_width", c.grid.half_width);
      read(g, "spacing", c.grid.spacing);
      read(g, "stencil_order", c.grid.stencil_order);
    }
    read(j, "mu", c.mu);
    read(j, "configuration_file", c.configuration_file);
    if (j.contains("configuration") && !j.at("configuration").is_null())
      c.configuration = configuration_from_json(j.at("configuration"));
    if (!c.configuration_file.empty()) {
      if (c.configuration)
        throw ConfigError("give either configuration or configuration_file, not both");
      std::ifstream in(c.configuration_file);
      if (!in) throw ConfigError("cannot open configuration file '" + c.configuration_file + "'");
      c.configuration = configuration_from_json(json::parse(in));
    }
    read(j, "m", c.m);
    read(j, "init", c.init);
    read(j, "init_spacing", c.init_spacing);
    if (j.contains("tolerances")) {
      const json& t = j.at("tolerances");
      reject_unknown(t, {"ground_state", "fixed_point", "max_iterations", "multiplier", "residual"},
                     "tolerances");
      read(t, "ground_state", c.tolerances.ground_state);
      read(t, "fixed_point", c.tolerances.fixed_point);
      read(t, "max_iterations", c.tolerances.max_iterations);
      read(t, "multiplier", c.tolerances.multiplier);
      read(t, "residual", c.tolerances.residual);
    }
    if (j.contains("optimizer")) {
      const json& o = j.at("optimizer");
      reject_unknown(o, {"restarts", "search_radius", "max_evaluations"}, "optimizer");
      read(o, "restarts", c.optimizer.restarts);
      read(o, "search_radius", c.optimizer.search_radius);
      read(o, "max_evaluations", c.optimizer.max_evaluations);
    }
    read(j, "m_max", c.m_max);
    read(j, "mus", c.mus);
    read(j, "separations", c.separations);
    read(j, "eigen_count", c.eigen_count);
    read(j, "sweep_betas", c.sweep_betas);
    read(j, "output_dir", c.output_dir);
    read(j, "seed", c.seed);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed run config: ") + e.what());
  }

  if (c.dim < 1 || c.dim > 3) throw ConfigError("dim must be 1, 2 or 3");
  if (!(c.beta < 1.0)) throw ConfigError("beta must be below 1");
  if (!(c.epsilon >= 0.0)) throw ConfigError("epsilon must be nonnegative");
  if (!(c.mu > 0.0)) throw ConfigError("mu must be positive");
  if (!(c.grid.spacing > 0.0)) throw ConfigError("grid spacing must be positive");
  if (!(c.grid.half_width >= 0.0)) throw ConfigError("grid half_width must be nonnegative");
  if (c.grid.stencil_order != 2 && c.grid.stencil_order != 4 && c.grid.stencil_order != 6)
    throw ConfigError("grid stencil_order must be 2, 4 or 6");
  if (c.configuration && c.configuration->dim != c.dim)
    throw ConfigError("configuration dimension differs from dim");
  if (c.configuration && c.configuration->mu != c.mu)
    throw ConfigError("configuration mu differs from mu");
  if (c.m < 1) throw ConfigError("m must be at least 1");
  if (c.init != "line") throw ConfigError("unknown init policy '" + c.init + "'");
  if (c.m_max < 1) throw ConfigError("m_max must be at least 1");
  if (c.optimizer.restarts < 1) throw ConfigError("optimizer restarts must be at least 1");
  if (c.tolerances.max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
  if (c.output_dir.empty()) throw ConfigError("output_dir must not be empty");
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_run_config(j);
}

json to_json(const RunConfig& c) {
  json j = {
      {"command", to_string(c.command)},
      {"dim", c.dim},
      {"beta", c.beta},
      {"epsilon", c.epsilon},
      {"potential_p", to_json(c.potential_p)},
      {"potential_q", to_json(c.potential_q)},
      {"grid",
       {{"half_width", c.grid.half_width},
        {"spacing", c.grid.spacing},
        {"stencil_order", c.grid.stencil_order}}},
      {"mu", c.mu},
      {"configuration", c.configuration && c.configuration_file.empty() ? to_json(*c.configuration)
                                                                         : json(nullptr)},
      {"configuration_file", c.configuration_file},
      {"m", c.m},
      {"init", c.init},
      {"init_spacing", c.init_spacing},
      {"tolerances",
       {{"ground_state", c.tolerances.ground_state},
        {"fixed_point", c.tolerances.fixed_point},
        {"max_iterations", c.tolerances.max_iterations},
        {"multiplier", c.tolerances.multiplier},
        {"residual", c.tolerances.residual}}},
      {"optimizer",
       {{"restarts", c.optimizer.restarts},
        {"search_radius", c.optimizer.search_radius},
        {"max_evaluations", c.optimizer.max_evaluations}}},
      {"m_max", c.m_max},
      {"mus", c.mus},
      {"separations", c.separations},
      {"eigen_count", c.eigen_count},
      {"sweep_betas", c.sweep_betas},
      {"output_dir", c.output_dir},
      {"seed", c.seed},
  };
  return j;
}

Configuration initial_configuration(const RunConfig& c) {
  if (c.configuration) return *c.configuration;
  const double gamma = gamma_of(c.beta);
  const double step = c.init_spacing > 0.0 ? c.init_spacing : 1.5 * c.mu / gamma;
  Configuration out{c.dim, c.mu, {}};
  const Point origin = c.potential_p.center;
  for (int j = 0; j < c.m; ++j) {
    Point p = origin;
    p[0] += (j - 0.5 * (c.m - 1)) * step;
    out.centers.push_back(p);
  }
  return out;
}

}  // namespace lsr::cli
