#include "lsr/potential.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "lsr/error.hpp"

namespace lsr {

double PotentialSpec::radial(double r, double gamma) const {
  switch (family) {
    case PotentialFamily::zero: return 0.0;
    case PotentialFamily::polynomial: return amplitude * std::pow(1.0 + r * r, -0.5 * k);
    case PotentialFamily::exponential: return amplitude * std::exp(-alpha_prime * gamma * r);
  }
  return 0.0;
}

double PotentialSpec::operator()(const Point& x, double gamma) const {
  return radial(distance(x, center), gamma);
}

ScalarField sample_potential(const PotentialSpec& spec, const Grid& grid, double gamma) {
  ScalarField out(static_cast<Eigen::Index>(grid.size()));
  if (spec.family == PotentialFamily::zero || spec.amplitude == 0.0) {
    out.setZero();
    return out;
  }
  for (std::size_t i = 0; i < grid.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = spec(grid.point(i), gamma);
  return out;
}

DecayCheck check_decay_to_zero(const PotentialSpec& spec, double gamma) {
  DecayCheck c;
  c.radii = {10.0, 100.0, 1e3, 1e4, 1e5};
  for (double r : c.radii) c.samples.push_back(std::abs(spec.radial(r, gamma)));
  const double scale = std::max(std::abs(spec.amplitude), 1e-300);
  c.passed = c.samples.back() <= 1e-6 * scale || spec.family == PotentialFamily::zero;
  for (std::size_t i = 1; i < c.samples.size() && c.passed; ++i)
    if (c.samples[i] > c.samples[i - 1]) c.passed = false;
  if (!c.passed) c.note = "potential does not decay to zero";
  return c;
}

DecayCheck check_slow_decay(const PotentialSpec& p, const PotentialSpec& q, double gamma,
                            double alpha) {
  DecayCheck c;
  if (!(alpha > 0.0 && alpha < 1.0)) {
    c.note = "alpha must lie in (0,1)";
    return c;
  }
  c.radii = {10.0, 20.0, 30.0, 60.0, 120.0};
  for (double r : c.radii)
    c.samples.push_back(gamma * gamma * (p.radial(r, gamma) + q.radial(r, gamma)) *
                        std::exp(alpha * gamma * r));
  c.passed = c.samples.front() > 0.0;
  for (std::size_t i = 1; i < c.samples.size() && c.passed; ++i)
    if (!(c.samples[i] > c.samples[i - 1])) c.passed = false;
  if (!c.passed) c.note = "γ²(P+Q) e^{αγ|x|} is not growing at large radii";
  return c;
}

const char* to_string(PotentialFamily family) {
  switch (family) {
    case PotentialFamily::zero: return "zero";
    case PotentialFamily::polynomial: return "polynomial";
    case PotentialFamily::exponential: return "exponential";
  }
  return "zero";
}

nlohmann::json to_json(const PotentialSpec& spec) {
  nlohmann::json j{{"family", to_string(spec.family)}, {"a", spec.amplitude}};
  if (spec.family == PotentialFamily::polynomial) j["k"] = spec.k;
  if (spec.family == PotentialFamily::exponential) j["alpha_prime"] = spec.alpha_prime;
  if (spec.center != Point{}) j["center"] = spec.center;
  return j;
}

PotentialSpec potential_from_json(const nlohmann::json& j) {
  PotentialSpec s;
  const auto family = j.at("family").get<std::string>();
  if (family == "zero") {
    s.family = PotentialFamily::zero;
  } else if (family == "polynomial") {
    s.family = PotentialFamily::polynomial;
    s.k = j.value("k", 3.0);
  } else if (family == "exponential") {
    s.family = PotentialFamily::exponential;
    s.alpha_prime = j.at("alpha_prime").get<double>();
  } else {
    throw ConfigError("unknown potential family '" + family + "'");
  }
  s.amplitude = j.value("a", 0.0);
  if (s.amplitude < 0.0) throw ConfigError("potential amplitude must be nonnegative");
  if (j.contains("center")) {
    const auto c = j.at("center").get<std::vector<double>>();
    for (std::size_t i = 0; i < c.size() && i < 3; ++i) s.center[i] = c[i];
  }
  return s;
}

}  // namespace lsr
