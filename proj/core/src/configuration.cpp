#include "lsr/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "lsr/error.hpp"

namespace lsr {

namespace {
constexpr double kTruncationDecayLengths = 15.0;
}

double Configuration::min_separation() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < centers.size(); ++j)
    for (std::size_t k = j + 1; k < centers.size(); ++k)
      best = std::min(best, distance(centers[j], centers[k]));
  return best;
}

double Configuration::max_coordinate() const {
  double m = 0.0;
  for (const auto& p : centers)
    for (int a = 0; a < dim; ++a) m = std::max(m, std::abs(p[static_cast<std::size_t>(a)]));
  return m;
}

Configuration Configuration::translated(const Point& shift) const {
  Configuration out = *this;
  for (auto& p : out.centers)
    for (std::size_t a = 0; a < 3; ++a) p[a] += shift[a];
  return out;
}

Configuration Configuration::with_center(const Point& p) const {
  Configuration out = *this;
  out.centers.push_back(p);
  return out;
}

ValidityReport validate_configuration(const Configuration& c, double gamma) {
  ValidityReport r;
  r.required_separation = c.mu / gamma;
  if (c.centers.empty()) return r;
  if (c.centers.size() == 1) {
    r.valid = true;
    r.min_separation = std::numeric_limits<double>::infinity();
    r.margin = std::numeric_limits<double>::infinity();
    return r;
  }
  r.min_separation = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < c.centers.size(); ++j)
    for (std::size_t k = j + 1; k < c.centers.size(); ++k) {
      const double d = distance(c.centers[j], c.centers[k]);
      if (d < r.min_separation) {
        r.min_separation = d;
        r.first = static_cast<int>(j);
        r.second = static_cast<int>(k);
      }
    }
  r.margin = r.min_separation - r.required_separation;
  // The boundary of Ω_m belongs to it; allow for rounding in the distance.
  r.valid = r.margin >= -1e-12 * std::max(1.0, r.required_separation);
  return r;
}

double required_half_width(const Configuration& c, double gamma) {
  return c.max_coordinate() + kTruncationDecayLengths / gamma;
}

nlohmann::json to_json(const Configuration& c) {
  nlohmann::json centers = nlohmann::json::array();
  for (const auto& p : c.centers) {
    nlohmann::json row = nlohmann::json::array();
    for (int a = 0; a < c.dim; ++a) row.push_back(p[static_cast<std::size_t>(a)]);
    centers.push_back(row);
  }
  return {{"dim", c.dim}, {"mu", c.mu}, {"centers", centers}};
}

Configuration configuration_from_json(const nlohmann::json& j) {
  Configuration c;
  c.dim = j.at("dim").get<int>();
  if (c.dim < 1 || c.dim > 3) throw ConfigError("configuration dim must be 1, 2 or 3");
  c.mu = j.at("mu").get<double>();
  for (const auto& row : j.at("centers")) {
    const auto coords = row.get<std::vector<double>>();
    if (static_cast<int>(coords.size()) != c.dim)
      throw ConfigError("center has wrong number of coordinates");
    Point p{};
    for (int a = 0; a < c.dim; ++a) p[static_cast<std::size_t>(a)] = coords[static_cast<std::size_t>(a)];
    c.centers.push_back(p);
  }
  if (c.centers.empty()) throw ConfigError("configuration needs at least one center");
  return c;
}

}  // namespace lsr
