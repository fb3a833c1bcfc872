#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lsr/grid.hpp"

namespace lsr {

enum class PotentialFamily { zero, polynomial, exponential };

/// Decaying potential P(x) or Q(x), radial about `center`.
///   polynomial:  a (1 + |x|^2)^{-k/2}
///   exponential: a exp(-α' γ |x|)
struct PotentialSpec {
  PotentialFamily family = PotentialFamily::zero;
  double amplitude = 0.0;
  double k = 3.0;
  double alpha_prime = 0.5;
  Point center{};

  static PotentialSpec zero() { return {}; }
  static PotentialSpec polynomial(double a, double k) {
    return {PotentialFamily::polynomial, a, k, 0.5, {}};
  }
  static PotentialSpec exponential(double a, double alpha_prime) {
    return {PotentialFamily::exponential, a, 3.0, alpha_prime, {}};
  }

  double operator()(const Point& x, double gamma) const;
  double radial(double r, double gamma) const;

  bool operator==(const PotentialSpec&) const = default;
};

/// Default slow-decay potential a = 1, k = 3.
inline PotentialSpec default_potential() { return PotentialSpec::polynomial(1.0, 3.0); }

ScalarField sample_potential(const PotentialSpec& spec, const Grid& grid, double gamma);

struct DecayCheck {
  bool passed = false;
  std::vector<double> radii;
  std::vector<double> samples;
  std::string note;
};

/// (K1): values decay toward zero along sampled radii.
DecayCheck check_decay_to_zero(const PotentialSpec& spec, double gamma);

/// (K2) for a chosen α ∈ (0,1): γ²(P+Q)(r) e^{αγr} strictly increasing over
/// the sampled radii {10, 20, 30, 60, 120}.
DecayCheck check_slow_decay(const PotentialSpec& p, const PotentialSpec& q, double gamma,
                            double alpha);

const char* to_string(PotentialFamily family);
nlohmann::json to_json(const PotentialSpec& spec);
PotentialSpec potential_from_json(const nlohmann::json& j);

}  // namespace lsr
