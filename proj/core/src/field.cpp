#include "lsr/field.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "lsr/error.hpp"

namespace lsr {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw GridMismatch("fields live on different grids");
}

Eigen::Index as_index(std::size_t i) { return static_cast<Eigen::Index>(i); }

double weighted_sum(const ScalarField& integrand, const ScalarField& weights) {
  const ScalarField prod = integrand.cwiseProduct(weights);
  return pairwise_sum(prod.data(), static_cast<std::size_t>(prod.size()));
}

// d f / d x_axis by second-order differences, one-sided on the faces.
ScalarField gradient_component(const ScalarField& f, const Grid& g, int axis) {
  ScalarField out(f.size());
  const std::size_t s = g.stride(axis);
  const int n = g.nodes_per_axis;
  const double h = g.spacing;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const int ia = g.multi_index(i)[static_cast<std::size_t>(axis)];
    const auto at = [&](long off) { return f[as_index(static_cast<std::size_t>(static_cast<long>(i) + off * static_cast<long>(s)))]; };
    double d;
    if (ia == 0)
      d = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
    else if (ia == n - 1)
      d = (3.0 * at(0) - 4.0 * at(-1) + at(-2)) / (2.0 * h);
    else
      d = (at(1) - at(-1)) / (2.0 * h);
    out[as_index(i)] = d;
  }
  return out;
}

}  // namespace

FieldPair FieldPair::zeros(const Grid& grid) {
  const auto n = as_index(grid.size());
  return {grid, ScalarField::Zero(n), ScalarField::Zero(n)};
}

FieldPair& FieldPair::operator+=(const FieldPair& o) {
  require_same_grid(grid, o.grid);
  u += o.u;
  v += o.v;
  return *this;
}

FieldPair& FieldPair::operator-=(const FieldPair& o) {
  require_same_grid(grid, o.grid);
  u -= o.u;
  v -= o.v;
  return *this;
}

FieldPair& FieldPair::operator*=(double s) {
  u *= s;
  v *= s;
  return *this;
}

bool FieldPair::all_finite() const { return u.allFinite() && v.allFinite(); }

SystemParams SystemParams::make(double beta, double epsilon, PotentialSpec p, PotentialSpec q) {
  if (!(epsilon >= 0.0)) throw DomainError("epsilon must be nonnegative");
  SystemParams s;
  s.beta = beta;
  s.gamma = gamma_of(beta);
  s.epsilon = epsilon;
  s.potential_p = p;
  s.potential_q = q;
  return s;
}

std::vector<double> stencil_weights(int order) {
  switch (order) {
    case 2: return {-2.0, 1.0};
    case 4: return {-5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0};
    case 6: return {-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0};
    default: throw DomainError("stencil order must be 2, 4 or 6");
  }
}

ScalarField laplacian(const ScalarField& f, const Grid& g) {
  if (f.size() != as_index(g.size())) throw GridMismatch("field size does not match grid");
  const auto c = stencil_weights(g.stencil_order);
  const int r = static_cast<int>(c.size()) - 1;
  const double inv_h2 = 1.0 / (g.spacing * g.spacing);
  const double rho = std::exp(-g.boundary_decay * g.spacing);
  const bool ghosts = g.boundary_decay > 0.0;
  const int n = g.nodes_per_axis;
  ScalarField out = (g.dim * c[0] * inv_h2) * f;
  for (int axis = 0; axis < g.dim; ++axis) {
    const std::size_t s = g.stride(axis);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const int ia = static_cast<int>((i / s) % static_cast<std::size_t>(n));
      double acc = 0.0;
      for (int k = 1; k <= r; ++k) {
        const double ck = c[static_cast<std::size_t>(k)];
        if (ia + k < n)
          acc += ck * f[as_index(i + k * s)];
        else if (ghosts)
          acc += ck * std::pow(rho, ia + k - (n - 1)) * f[as_index(i + (n - 1 - ia) * s)];
        if (ia - k >= 0)
          acc += ck * f[as_index(i - k * s)];
        else if (ghosts)
          acc += ck * std::pow(rho, k - ia) * f[as_index(i - ia * s)];
      }
      out[as_index(i)] += acc * inv_h2;
    }
  }
  return out;
}

Eigen::SparseMatrix<double> laplacian_matrix(const Grid& g) {
  const auto c = stencil_weights(g.stencil_order);
  const int r = static_cast<int>(c.size()) - 1;
  const double inv_h2 = 1.0 / (g.spacing * g.spacing);
  const double rho = std::exp(-g.boundary_decay * g.spacing);
  const bool ghosts = g.boundary_decay > 0.0;
  const int n = g.nodes_per_axis;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(g.size() * static_cast<std::size_t>(1 + 2 * r * g.dim));
  for (std::size_t i = 0; i < g.size(); ++i) {
    t.emplace_back(as_index(i), as_index(i), g.dim * c[0] * inv_h2);
    for (int axis = 0; axis < g.dim; ++axis) {
      const std::size_t s = g.stride(axis);
      const int ia = static_cast<int>((i / s) % static_cast<std::size_t>(n));
      for (int k = 1; k <= r; ++k) {
        const double ck = c[static_cast<std::size_t>(k)] * inv_h2;
        if (ia + k < n)
          t.emplace_back(as_index(i), as_index(i + k * s), ck);
        else if (ghosts)
          t.emplace_back(as_index(i), as_index(i + (n - 1 - ia) * s),
                         ck * std::pow(rho, ia + k - (n - 1)));
        if (ia - k >= 0)
          t.emplace_back(as_index(i), as_index(i - k * s), ck);
        else if (ghosts)
          t.emplace_back(as_index(i), as_index(i - ia * s), ck * std::pow(rho, k - ia));
      }
    }
  }
  Eigen::SparseMatrix<double> m(as_index(g.size()), as_index(g.size()));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

double integrate(const ScalarField& f, const Grid& grid) {
  if (f.size() != as_index(grid.size())) throw GridMismatch("field size does not match grid");
  return weighted_sum(f, quadrature_weights(grid));
}

double inner(const FieldPair& f, const FieldPair& g) {
  require_same_grid(f.grid, g.grid);
  const ScalarField integrand = f.u.cwiseProduct(g.u) + f.v.cwiseProduct(g.v);
  return weighted_sum(integrand, quadrature_weights(f.grid));
}

double h1_norm(const FieldPair& f) {
  const ScalarField w = quadrature_weights(f.grid);
  auto component = [&](const ScalarField& u) {
    ScalarField integrand = u.cwiseProduct(u);
    for (int a = 0; a < f.grid.dim; ++a) {
      const ScalarField d = gradient_component(u, f.grid, a);
      integrand += d.cwiseProduct(d);
    }
    return std::sqrt(std::max(0.0, weighted_sum(integrand, w)));
  };
  return component(f.u) + component(f.v);
}

double energy_J(const FieldPair& f, const SystemParams& p) {
  const Grid& g = f.grid;
  const ScalarField P = sample_potential(p.potential_p, g, p.gamma);
  const ScalarField Q = sample_potential(p.potential_q, g, p.gamma);
  const ScalarField lu = laplacian(f.u, g);
  const ScalarField lv = laplacian(f.v, g);
  ScalarField e(f.u.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    const double u = f.u[i], v = f.v[i];
    const double quad = -u * lu[i] + (1.0 + p.epsilon * P[i]) * u * u - v * lv[i] +
                        (1.0 + p.epsilon * Q[i]) * v * v;
    e[i] = 0.5 * quad - 0.25 * (u * u * u * u + v * v * v * v) - p.beta * u * v;
  }
  return weighted_sum(e, quadrature_weights(g));
}

FieldPair residual_G(const FieldPair& f, const SystemParams& p) {
  const Grid& g = f.grid;
  const ScalarField P = sample_potential(p.potential_p, g, p.gamma);
  const ScalarField Q = sample_potential(p.potential_q, g, p.gamma);
  FieldPair out{g, laplacian(f.u, g), laplacian(f.v, g)};
  for (Eigen::Index i = 0; i < out.u.size(); ++i) {
    const double u = f.u[i], v = f.v[i];
    out.u[i] += -(1.0 + p.epsilon * P[i]) * u + u * u * u + p.beta * v;
    out.v[i] += -(1.0 + p.epsilon * Q[i]) * v + v * v * v + p.beta * u;
  }
  return out;
}

ScalarField weight_F(const Grid& grid, const Configuration& c, double gamma, double nu) {
  if (c.centers.empty()) throw DomainError("weight F needs a nonempty configuration");
  ScalarField F = ScalarField::Zero(as_index(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.point(i);
    double s = 0.0;
    for (const auto& P : c.centers) s += std::exp(-nu * gamma * distance(x, P));
    F[as_index(i)] = s;
  }
  return F;
}

double star_norm(const FieldPair& f, const ScalarField& weight) {
  if (weight.size() != f.u.size()) throw GridMismatch("weight size does not match field");
  return f.u.cwiseQuotient(weight).cwiseAbs().maxCoeff() +
         f.v.cwiseQuotient(weight).cwiseAbs().maxCoeff();
}

double star_norm(const FieldPair& f, const Configuration& c, double gamma, double nu) {
  return star_norm(f, weight_F(f.grid, c, gamma, nu));
}

double energy_I(double beta, const GroundState& gs) {
  const double gamma = gamma_of(beta);
  const int N = gs.dim();
  const double sphere = N == 1 ? 2.0 : (N == 2 ? 2.0 * kPi : 4.0 * kPi);
  // Composite Simpson in the physical radius up to 40 decay lengths.
  const double R = 40.0 / gamma;
  const int intervals = 40000;
  const double dr = R / intervals;
  auto integrand = [&](double r) {
    const double U = gamma * gs.value(gamma * r);
    const double dU = gamma * gamma * gs.derivative(gamma * r);
    const double density = 0.5 * dU * dU + 0.5 * (1.0 - beta) * U * U - 0.25 * U * U * U * U;
    return 2.0 * density * std::pow(r, N - 1);  // two identical components
  };
  std::vector<double> terms(static_cast<std::size_t>(intervals) + 1);
  for (int i = 0; i <= intervals; ++i) {
    const double wgt = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    terms[static_cast<std::size_t>(i)] = wgt * integrand(i * dr);
  }
  return sphere * dr / 3.0 * pairwise_sum(terms.data(), terms.size());
}

void write_field_csv(std::ostream& out, const FieldPair& f) {
  static const char* axis_names[3] = {"x", "y", "z"};
  for (int a = 0; a < f.grid.dim; ++a) out << axis_names[a] << ',';
  out << "u,v\n" << std::setprecision(17);
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    const Point p = f.grid.point(i);
    for (int a = 0; a < f.grid.dim; ++a) out << p[static_cast<std::size_t>(a)] << ',';
    out << f.u[as_index(i)] << ',' << f.v[as_index(i)] << '\n';
  }
}

}  // namespace lsr
