#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "lsr/ansatz.hpp"
#include "lsr/configuration.hpp"
#include "lsr/error.hpp"
#include "lsr/potential.hpp"
#include "support.hpp"

using namespace lsr;

TEST_CASE("admissible configurations") {
  const double gamma = 0.8, mu = 10.0, h = 0.05;
  CHECK(validate_configuration({1, mu, {Point{3, 0, 0}}}, gamma).valid);
  const ValidityReport edge =
      validate_configuration({1, mu, {Point{0, 0, 0}, Point{mu / gamma, 0, 0}}}, gamma);
  CHECK(edge.valid);
  const ValidityReport in =
      validate_configuration({1, mu, {Point{0, 0, 0}, Point{mu / gamma - h, 0, 0}}}, gamma);
  CHECK_FALSE(in.valid);
  CHECK(in.margin == doctest::Approx(-h));
  CHECK(in.first == 0);
  CHECK(in.second == 1);
}

TEST_CASE("configuration JSON round trip") {
  const Configuration c{2, 9.5, {Point{1.25, -3, 0}, Point{0.1, 7, 0}}};
  CHECK(configuration_from_json(to_json(c)) == c);
  CHECK_THROWS_AS(configuration_from_json(nlohmann::json{{"dim", 2}, {"mu", 1.0}, {"centers", {{1.0}}}}),
                  ConfigError);
}

TEST_CASE("ansatz") {
  const auto gs = test::ground(1);
  SUBCASE("single spike") {
    const BlockProfile b = build_block(gs, 0.5);
    const Grid g = Grid::make(1, 25.0, 0.05);
    const FieldPair f = assemble_ansatz({1, 10.0, {Point{}}}, b, g);
    CHECK(f.u[static_cast<Eigen::Index>(g.size() / 2)] == doctest::Approx(b.gamma() * gs->center_value()));
    CHECK(f.u == f.v);
  }
  SUBCASE("two spikes overlap at the midpoint") {
    const BlockProfile b = build_block(gs, 0.0);
    const Grid g = Grid::make(1, 25.0, 0.05);
    const FieldPair f = assemble_ansatz({1, 10.0, {Point{-5, 0, 0}, Point{5, 0, 0}}}, b, g);
    const double mid = f.u[static_cast<Eigen::Index>(g.size() / 2)];
    CHECK(mid == doctest::Approx(2.0 * 2.0 * std::sqrt(2.0) * std::exp(-5.0)).epsilon(1e-3));
    CHECK(f.u == f.v);
  }
  SUBCASE("additive over disjoint configurations") {
    const BlockProfile b = build_block(gs, 0.3);
    const Grid g = Grid::make(2, 30.0, 0.5);
    const Configuration c1{2, 10.0, {Point{-6, 0, 0}}}, c2{2, 10.0, {Point{6, 1, 0}, Point{0, 9, 0}}};
    const Configuration both{2, 10.0, {c1.centers[0], c2.centers[0], c2.centers[1]}};
    const FieldPair sum = assemble_ansatz(c1, b, g) + assemble_ansatz(c2, b, g);
    CHECK((assemble_ansatz(both, b, g).u - sum.u).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("spikes too close to the boundary") {
    const BlockProfile b = build_block(gs, 0.5);
    const Grid g = Grid::make(1, 20.0, 0.05);
    CHECK_THROWS_AS(assemble_ansatz({1, 10.0, {Point{5, 0, 0}}}, b, g), TruncationError);
    try {
      assemble_ansatz({1, 10.0, {Point{5, 0, 0}}}, b, g);
    } catch (const TruncationError& e) {
      CHECK(e.required_half_width() == doctest::Approx(5.0 + 15.0 / b.gamma()));
    }
  }
}

TEST_CASE("cutoff") {
  const double mu = 10.0, gamma = 0.7;
  const CutoffRadii r = cutoff_radii(mu, gamma);
  CHECK(r.inner == doctest::Approx((mu - 1) / (2 * gamma)));
  CHECK(r.outer == doctest::Approx(mu * mu / (2 * gamma * (mu + 1))));
  const Point c{1, 2, 0};
  CHECK(cutoff_zeta(c, c, mu, gamma) == 1.0);
  CHECK(cutoff_zeta(Point{1 + r.outer, 2, 0}, c, mu, gamma) == 0.0);
  CHECK(cutoff_zeta(Point{1 + r.inner, 2, 0}, c, mu, gamma) == 1.0);
  const double mid = cutoff_zeta(Point{1 + 0.5 * (r.inner + r.outer), 2, 0}, c, mu, gamma);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  double last = 1.0;
  for (double t = r.inner; t <= r.outer; t += 0.01) {
    const double z = cutoff_zeta(Point{1, 2 + t, 0}, c, mu, gamma);
    CHECK(z <= last);
    last = z;
  }
  CHECK_THROWS_AS(cutoff_zeta(c, c, 2.0, gamma), DomainError);
}

TEST_CASE("kernel basis") {
  const auto gs = test::ground(1);
  SUBCASE("norm of D for one spike") {
    const BlockProfile b = build_block(gs, 0.0);
    const Grid g = Grid::make(1, 25.0, 0.01);
    const auto D = kernel_basis({1, 10.0, {Point{}}}, b, g);
    REQUIRE(D.size() == 1);
    CHECK(inner(D[0], D[0]) == doctest::Approx(2.0 * 4.0 / 3.0).epsilon(1e-2));
    CHECK(D[0].u == D[0].v);
  }
  SUBCASE("supports are the cutoff balls") {
    const double beta = 0.5, mu = 10.0;
    const BlockProfile b = build_block(gs, beta);
    const double sep = mu / b.gamma();
    const Grid g = Grid::make(1, 40.0, 0.05);
    const Configuration c{1, mu, {Point{-sep / 2, 0, 0}, Point{sep / 2, 0, 0}}};
    const auto D = kernel_basis(c, b, g);
    const double outer = cutoff_radii(mu, b.gamma()).outer;
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t i = 0; i < g.size(); ++i)
        if (distance(g.point(i), c.centers[j]) >= outer) REQUIRE(D[j].u[static_cast<Eigen::Index>(i)] == 0.0);
    CHECK(inner(D[0], D[1]) == 0.0);
  }
  SUBCASE("different directions are orthogonal in 2D") {
    const BlockProfile b = build_block(test::ground(2), 0.5);
    const Grid g = Grid::make(2, 25.0, 0.1);
    const auto D = kernel_basis({2, 10.0, {Point{}}}, b, g);
    REQUIRE(D.size() == 2);
    CHECK(std::abs(inner(D[0], D[1])) < 1e-10 * inner(D[0], D[0]));
  }
}

TEST_CASE("potentials") {
  const double gamma = std::sqrt(0.5);
  const PotentialSpec poly = default_potential();
  CHECK(check_decay_to_zero(poly, gamma).passed);
  CHECK(check_slow_decay(poly, poly, gamma, 0.5).passed);
  double last = 0.0;
  for (double r : {10.0, 20.0, 30.0}) {
    const double v = gamma * gamma * 2.0 * poly.radial(r, gamma) * std::exp(0.5 * gamma * r);
    CHECK(v > last);
    last = v;
  }
  const PotentialSpec slow = PotentialSpec::exponential(1.0, 0.3);
  const PotentialSpec fast = PotentialSpec::exponential(1.0, 0.8);
  CHECK(check_slow_decay(slow, slow, gamma, 0.5).passed);
  CHECK_FALSE(check_slow_decay(fast, fast, gamma, 0.5).passed);
  CHECK(check_decay_to_zero(fast, gamma).passed);

  PotentialSpec shifted = PotentialSpec::polynomial(0.5, 4.0);
  shifted.center = Point{1, -2, 0};
  CHECK(potential_from_json(to_json(shifted)) == shifted);
  CHECK(potential_from_json(to_json(slow)) == slow);
  CHECK_THROWS_AS(potential_from_json(nlohmann::json{{"family", "gaussian"}}), ConfigError);
}
