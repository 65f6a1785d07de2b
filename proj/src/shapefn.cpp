#include "anisoshape/shapefn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "anisoshape/nelder_mead.hpp"
#include "anisoshape/parallel.hpp"

namespace anisoshape {

const FormErrorKernel& form_kernel(int m, double p) {
  static std::map<std::pair<int, double>, std::unique_ptr<FormErrorKernel>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{m, p}];
  if (!slot) slot = std::make_unique<FormErrorKernel>(m, p);
  return *slot;
}

namespace {

LinearMap2 sl2_map(double theta1, double theta2, double t) {
  LinearMap2 d = LinearMap2::Zero();
  d(0, 0) = t;
  d(1, 1) = 1.0 / t;
  return rotation(theta1) * d * rotation(theta2);
}

}  // namespace

Triangle sl2_triangle(double theta1, double theta2, double t) {
  return unit_equilateral().transformed(sl2_map(theta1, theta2, t));
}

double sl2_min_t(double theta2, double cap) {
  const Triangle eq = unit_equilateral().transformed(rotation(theta2));
  if (!(cap >= eq.diameter() * (1 - 1e-12))) throw std::invalid_argument("cap below the equilateral diameter");
  // Edge (a, b) maps to (t a, b / t); |.| <= cap iff a^2 u^2 - cap^2 u + b^2 <= 0, u = t^2.
  double umin = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Point2 e = eq.v[(k + 1) % 3] - eq.v[k];
    const double a2 = e.x() * e.x(), b2 = e.y() * e.y(), c2 = cap * cap;
    double u;
    if (a2 == 0.0) {
      u = b2 / c2;
    } else {
      const double disc = std::max(0.0, c2 * c2 - 4.0 * a2 * b2);
      u = 2.0 * b2 / (c2 + std::sqrt(disc));
    }
    umin = std::max(umin, u);
  }
  return std::min(1.0, std::sqrt(umin) * (1.0 + 1e-12));
}

ShapeResult shape_oracle(const HomogeneousForm& pi, const ShapeQuery& q) {
  if (pi.is_zero()) throw std::invalid_argument("shape oracle of the zero form");
  if (!(q.p >= 1)) throw std::invalid_argument("p must be in [1, inf]");
  if (q.grid_theta1 < 1 || q.grid_theta2 < 1 || q.grid_t < 2 || q.starts < 1 || q.max_evals < 1) {
    throw std::invalid_argument("oracle budgets must be positive");
  }
  const int m = pi.degree();
  const FormErrorKernel& kernel = form_kernel(m, q.p);
  const LinearMap2 jeq = unit_equilateral().edge_matrix();
  const double pi_c = std::numbers::pi;

  // s in [0, 1] interpolates log t between 0 (t = 1) and log t_min(theta2).
  auto t_of = [&](double theta2, double s) {
    s = std::clamp(s, 0.0, 1.0);
    return std::pow(sl2_min_t(theta2, q.cap), s);
  };
  // |det J| = 2 for unit area. A relative 1e-7 diameter penalty selects the
  // most compact triangle when the minimum is attained on a plateau.
  const double jac = std::isinf(q.p) ? 1.0 : std::pow(2.0, 1.0 / q.p);
  auto raw = [&](double th1, double th2, double s) {
    const LinearMap2 j = sl2_map(th1, th2, t_of(th2, s)) * jeq;
    return jac * kernel.reference_error(compose(pi, j));
  };
  auto objective = [&](double th1, double th2, double s) {
    const double d = sl2_triangle(th1, th2, t_of(th2, s)).diameter() / q.cap;
    return raw(th1, th2, s) * (1.0 + 1e-7 * d * d);
  };

  const int n1 = q.grid_theta1, n2 = q.grid_theta2, nt = q.grid_t;
  std::vector<double> grid(static_cast<std::size_t>(n1) * n2 * nt);
  parallel_for(static_cast<std::size_t>(n1), [&](std::size_t i) {
    for (int j = 0; j < n2; ++j)
      for (int k = 0; k < nt; ++k) {
        grid[(i * n2 + j) * nt + k] =
            objective(pi_c * i / n1, 2.0 * pi_c / 3.0 * j / n2, static_cast<double>(k) / (nt - 1));
      }
  });
  std::vector<std::size_t> order(grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t starts = std::min<std::size_t>(static_cast<std::size_t>(q.starts), order.size());
  std::partial_sort(order.begin(), order.begin() + starts, order.end(),
                    [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });

  struct {
    double value = INFINITY;
    Triangle triangle;
    bool converged = false;
    int evaluations = 0;
    std::vector<double> x;
  } best;
  best.evaluations = static_cast<int>(grid.size());
  std::vector<NelderMeadResult> runs(starts);
  parallel_for(starts, [&](std::size_t r) {
    const std::size_t idx = order[r];
    const int k = static_cast<int>(idx % nt);
    const int j = static_cast<int>((idx / nt) % n2);
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(nt) * n2));
    NelderMeadOptions opts;
    opts.max_evals = q.max_evals;
    opts.xtol = 1e-9;
    opts.ftol = q.tol;
    opts.step = {pi_c / n1 / 2, pi_c / n2 / 3, 0.5 / (nt - 1)};
    runs[r] = nelder_mead([&](const std::vector<double>& x) { return objective(x[0], x[1], x[2]); },
                          {pi_c * i / n1, 2.0 * pi_c / 3.0 * j / n2, static_cast<double>(k) / (nt - 1)}, opts);
  });
  // Ties (relative 1e-6) go to the smallest diameter: minimizer families are
  // often non-compact and the compact representative meshes best.
  double lowest = INFINITY;
  for (const auto& run : runs) lowest = std::min(lowest, run.value);
  double best_diameter = INFINITY;
  for (std::size_t r = 0; r < starts; ++r) {
    best.evaluations += runs[r].evaluations;
    if (!(runs[r].value <= lowest + 1e-6 * std::abs(lowest))) continue;
    const auto& x = runs[r].x;
    const Triangle t = sl2_triangle(x[0], x[1], t_of(x[1], x[2]));
    if (t.diameter() < best_diameter) {
      best_diameter = t.diameter();
      best.value = runs[r].value;
      best.converged = runs[r].converged;
      best.x = x;
      best.triangle = t;
    }
  }
  if (grid[order[0]] < best.value) {
    const std::size_t idx = order[0];
    const int k = static_cast<int>(idx % nt);
    const int j = static_cast<int>((idx / nt) % n2);
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(nt) * n2));
    best.value = grid[idx];
    const double th2 = 2.0 * pi_c / 3.0 * j / n2;
    best.x = {pi_c * i / n1, th2, static_cast<double>(k) / (nt - 1)};
    best.triangle = sl2_triangle(pi_c * i / n1, th2, t_of(th2, static_cast<double>(k) / (nt - 1)));
  }
  ShapeResult out;
  out.value = raw(best.x[0], best.x[1], best.x[2]);
  out.triangle = best.triangle;
  out.cap = q.cap;
  out.converged = best.converged;
  out.evaluations = best.evaluations;
  return out;
}

}  // namespace anisoshape
