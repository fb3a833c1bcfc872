#include "lsr/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "lsr/error.hpp"

namespace lsr {

SimplexResult maximize_simplex(const std::function<double(const Eigen::VectorXd&)>& f,
                               const Eigen::VectorXd& x0, const SimplexOptions& opt) {
  const auto n = x0.size();
  if (n == 0) throw DomainError("simplex search needs at least one variable");
  const double dn = static_cast<double>(n);
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / dn;
  const double contract = 0.75 - 1.0 / (2.0 * dn);
  const double shrink = 1.0 - 1.0 / dn;

  SimplexResult res;
  // Minimize g = -f.
  auto g = [&](const Eigen::VectorXd& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? -v : std::numeric_limits<double>::infinity();
  };

  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> val(static_cast<std::size_t>(n + 1));
  for (Eigen::Index i = 0; i < n; ++i) pts[static_cast<std::size_t>(i + 1)][i] += opt.initial_step;
  for (std::size_t i = 0; i < pts.size(); ++i) val[i] = g(pts[i]);

  std::vector<std::size_t> order(pts.size());
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    std::vector<Eigen::VectorXd> p2;
    std::vector<double> v2;
    for (auto i : order) {
      p2.push_back(pts[i]);
      v2.push_back(val[i]);
    }
    pts = std::move(p2);
    val = std::move(v2);
  };

  sort_simplex();
  while (res.evaluations < opt.max_evaluations) {
    double size = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i)
      size = std::max(size, (pts[i] - pts[0]).cwiseAbs().maxCoeff());
    if (size <= opt.xtol && std::abs(val.back() - val.front()) <= opt.ftol) {
      res.converged = true;
      break;
    }
    ++res.iterations;
    const std::size_t worst = pts.size() - 1;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < worst; ++i) centroid += pts[i];
    centroid /= dn;

    const Eigen::VectorXd xr = centroid + reflect * (centroid - pts[worst]);
    const double fr = g(xr);
    if (fr < val[0]) {
      const Eigen::VectorXd xe = centroid + expand * (xr - centroid);
      const double fe = g(xe);
      if (fe < fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
    } else if (fr < val[worst - 1]) {
      pts[worst] = xr;
      val[worst] = fr;
    } else {
      const bool outside = fr < val[worst];
      const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + contract * (xr - centroid))
                                         : Eigen::VectorXd(centroid + contract * (pts[worst] - centroid));
      const double fc = g(xc);
      if (fc < std::min(fr, val[worst])) {
        pts[worst] = xc;
        val[worst] = fc;
      } else {
        for (std::size_t i = 1; i < pts.size(); ++i) {
          pts[i] = pts[0] + shrink * (pts[i] - pts[0]);
          val[i] = g(pts[i]);
        }
      }
    }
    sort_simplex();
  }
  res.x = pts[0];
  res.value = -val[0];
  return res;
}

}  // namespace lsr
