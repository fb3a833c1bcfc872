#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lsr/configuration.hpp"
#include "lsr/potential.hpp"

namespace lsr::cli {

enum class Command { ground_state, solve, optimize, ladder, spectrum, diagnose };

const char* to_string(Command c);
Command command_from_string(const std::string& name);

/// Grid request. A half width of 0 lets the command pick the smallest box
/// that satisfies the truncation rule for its configurations.
struct GridSpec {
  double half_width = 0.0;
  double spacing = 0.05;
  int stencil_order = 6;

  bool operator==(const GridSpec&) const = default;
};

struct Tolerances {
  double ground_state = 1e-6;
  double fixed_point = 1e-9;
  int max_iterations = 50;
  double multiplier = 1e-6;
  double residual = 1e-4;

  bool operator==(const Tolerances&) const = default;
};

struct OptimizerSpec {
  int restarts = 5;
  /// Non-positive: as large as the grid allows.
  double search_radius = 0.0;
  int max_evaluations = 1500;

  bool operator==(const OptimizerSpec&) const = default;
};

/// One batch run. Configs are JSON; every field has a default, unknown keys
/// are rejected.
struct RunConfig {
  Command command = Command::solve;
  int dim = 1;
  double beta = 0.5;
  double epsilon = 0.0;
  PotentialSpec potential_p = default_potential();
  PotentialSpec potential_q = default_potential();
  GridSpec grid;
  double mu = 10.0;

  /// Explicit centers; otherwise `m` spikes placed by `init`.
  std::optional<Configuration> configuration;
  /// JSON file holding the configuration. Loaded at parse time.
  std::string configuration_file;
  int m = 1;
  /// "line": centers along x_1 about the potential center, `init_spacing`
  /// apart (0 means 1.5 μ/γ).
  std::string init = "line";
  double init_spacing = 0.0;

  Tolerances tolerances;
  OptimizerSpec optimizer;

  int m_max = 2;
  std::vector<double> mus{8.0, 10.0, 12.0};
  std::vector<double> separations{8.0, 10.0, 12.0};
  /// Eigenpairs for the spectrum command; 0 means N + 2.
  int eigen_count = 0;
  /// Extra β values for a degeneracy sweep in the spectrum command.
  std::vector<double> sweep_betas;

  std::string output_dir = "out";
  std::uint64_t seed = 0;

  bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigError on malformed input, unknown keys, β >= 1, missing files.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);
nlohmann::json to_json(const RunConfig& c);

/// The explicit configuration, or the `init` placement of `m` spikes.
Configuration initial_configuration(const RunConfig& c);

}  // namespace lsr::cli
