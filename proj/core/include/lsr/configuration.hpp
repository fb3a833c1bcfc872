#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lsr/grid.hpp"

namespace lsr {

/// Spike centers P_1..P_m with separation parameter μ. A configuration
/// belongs to Ω_m when min_{j≠k} |P_j - P_k| >= μ/γ.
struct Configuration {
  int dim = 1;
  double mu = 10.0;
  std::vector<Point> centers;

  int count() const noexcept { return static_cast<int>(centers.size()); }
  double min_separation() const;
  /// Largest coordinate magnitude over all centers.
  double max_coordinate() const;
  Configuration translated(const Point& shift) const;
  Configuration with_center(const Point& p) const;

  bool operator==(const Configuration&) const = default;
};

struct ValidityReport {
  bool valid = false;
  double min_separation = 0.0;
  double required_separation = 0.0;
  /// min_separation - μ/γ; negative when the constraint is violated.
  double margin = 0.0;
  int first = -1;
  int second = -1;
};

ValidityReport validate_configuration(const Configuration& c, double gamma);

/// Half width needed so every spike sits at least 15/γ inside the box.
double required_half_width(const Configuration& c, double gamma);

nlohmann::json to_json(const Configuration& c);
Configuration configuration_from_json(const nlohmann::json& j);

}  // namespace lsr
