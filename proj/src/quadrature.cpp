#include "anisoshape/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace anisoshape {

namespace {

template <class T, class Make>
const T& cached(std::map<int, std::unique_ptr<T>>& cache, std::mutex& mu, int key, Make make) {
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<T>(make())).first;
  return *it->second;
}

GaussLegendre make_gauss_legendre(int n) {
  GaussLegendre g;
  g.nodes.resize(n);
  g.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    g.nodes[i] = 0.5 * (1.0 - x);
    g.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return g;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
  static std::map<int, std::unique_ptr<GaussLegendre>> cache;
  static std::mutex mu;
  return cached(cache, mu, n, [n] { return make_gauss_legendre(n); });
}

const QuadRule& triangle_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("quadrature degree must be nonnegative");
  // x = u, y = (1 - u) v with Jacobian (1 - u): degree + 1 in u, degree in v.
  const int n = (degree + 3) / 2;
  static std::map<int, std::unique_ptr<QuadRule>> cache;
  static std::mutex mu;
  return cached(cache, mu, n, [n] {
    const GaussLegendre& g = gauss_legendre(n);
    QuadRule r;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double u = g.nodes[i];
        const double v = g.nodes[j];
        r.points.emplace_back(u, (1.0 - u) * v);
        r.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - u));
      }
    }
    return r;
  });
}

const QuadRule& lattice_centroid_rule(int n) {
  if (n < 1) throw std::invalid_argument("lattice size must be positive");
  static std::map<int, std::unique_ptr<QuadRule>> cache;
  static std::mutex mu;
  return cached(cache, mu, n, [n] {
    QuadRule r;
    const double h = 1.0 / n;
    const double w = 0.5 * h * h;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; i + j < n; ++j) {
        r.points.emplace_back((i + 1.0 / 3.0) * h, (j + 1.0 / 3.0) * h);
        r.weights.push_back(w);
        if (i + j + 1 < n) {
          r.points.emplace_back((i + 2.0 / 3.0) * h, (j + 2.0 / 3.0) * h);
          r.weights.push_back(w);
        }
      }
    }
    return r;
  });
}

const std::vector<Point2>& lattice_points(int n) {
  if (n < 1) throw std::invalid_argument("lattice size must be positive");
  static std::map<int, std::unique_ptr<std::vector<Point2>>> cache;
  static std::mutex mu;
  return cached(cache, mu, n, [n] {
    std::vector<Point2> pts;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; i + j <= n; ++j) pts.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    return pts;
  });
}

}  // namespace anisoshape
