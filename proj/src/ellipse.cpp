#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "anisoshape/nelder_mead.hpp"
#include "anisoshape/shapefn.hpp"

namespace anisoshape {

namespace {

constexpr int kDirections = 720;
constexpr double kRatioCap = 1e8;

// Required e2 from direction phi, or -inf when phi imposes nothing on e2.
double need_e2(const HomogeneousForm& pi, double theta, double e1, double phi) {
  const int m = pi.degree();
  const double g = std::pow(std::abs(pi(std::cos(phi), std::sin(phi))), 2.0 / m);
  const double wx = std::cos(phi - theta);
  const double wy = std::sin(phi - theta);
  const double num = g - e1 * wx * wx;
  if (wy * wy <= 1e-300) return num > 0 ? INFINITY : -INFINITY;
  return num / (wy * wy);
}

}  // namespace

double ellipse_min_e2(const HomogeneousForm& pi, double theta, double e1) {
  const double step = std::numbers::pi / kDirections;
  double best = -INFINITY;
  int arg = 0;
  for (int k = 0; k < kDirections; ++k) {
    const double v = need_e2(pi, theta, e1, k * step);
    if (v > best) {
      best = v;
      arg = k;
    }
  }
  if (!std::isfinite(best)) return best;
  // Golden-section refinement of the active direction.
  double a = (arg - 1) * step, b = (arg + 1) * step;
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = need_e2(pi, theta, e1, c), fd = need_e2(pi, theta, e1, d);
  for (int it = 0; it < 60; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = need_e2(pi, theta, e1, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = need_e2(pi, theta, e1, d);
    }
  }
  return std::max({best, fc, fd});
}

EllipseResult shape_ellipse(const HomogeneousForm& pi) {
  if (pi.is_zero()) throw std::invalid_argument("ellipse shape function of the zero form");
  const int m = pi.degree();
  double gmax = 0.0;
  for (int k = 0; k < kDirections; ++k) {
    const double phi = std::numbers::pi * k / kDirections;
    gmax = std::max(gmax, std::pow(std::abs(pi(std::cos(phi), std::sin(phi))), 2.0 / m));
  }
  // Product e1 * e2 with the ratio cap; also reports whether the cap binds.
  auto product = [&](double theta, double log_e1, bool* capped) {
    const double e1 = gmax * std::exp(log_e1);
    const double need = ellipse_min_e2(pi, theta, e1);
    const double e2 = std::max(need, e1 / kRatioCap);
    if (capped) *capped = need < e1 / kRatioCap;
    if (e2 > e1 * kRatioCap) return static_cast<double>(INFINITY);
    return e1 * e2;
  };

  const int nth = 36, ne = 49;
  const double span = std::log(kRatioCap);
  std::vector<std::pair<double, std::pair<double, double>>> grid;
  for (int i = 0; i < nth; ++i)
    for (int j = 0; j < ne; ++j) {
      const double th = std::numbers::pi * i / nth;
      const double le = -span / 2 + span * j / (ne - 1);
      grid.push_back({product(th, le, nullptr), {th, le}});
    }
  std::partial_sort(grid.begin(), grid.begin() + 4, grid.end());
  double best = INFINITY, bt = 0, be = 0;
  for (int s = 0; s < 4; ++s) {
    NelderMeadOptions opts;
    opts.max_evals = 800;
    opts.xtol = 1e-10;
    opts.ftol = 1e-14;
    opts.step = {std::numbers::pi / nth / 2, span / (ne - 1) / 2};
    const auto res = nelder_mead([&](const std::vector<double>& x) { return product(x[0], x[1], nullptr); },
                                 {grid[s].second.first, grid[s].second.second}, opts);
    if (res.value < best) {
      best = res.value;
      bt = res.x[0];
      be = res.x[1];
    }
  }
  EllipseResult out;
  if (!std::isfinite(best) || best <= 0) {
    out.unbounded = true;
    out.area = INFINITY;
    out.value = 0.0;
    return out;
  }
  bool capped = false;
  product(bt, be, &capped);
  const double e1 = gmax * std::exp(be);
  const double e2 = best / e1;
  const LinearMap2 r = rotation(-bt);  // maps direction bt to the x-axis
  LinearMap2 d = LinearMap2::Zero();
  d(0, 0) = e1;
  d(1, 1) = e2;
  out.h = r.transpose() * d * r;
  out.area = std::numbers::pi / std::sqrt(best);
  out.value = std::pow(out.area, -0.5 * m);
  out.unbounded = capped;
  return out;
}

}  // namespace anisoshape
