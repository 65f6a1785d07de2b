#pragma once

#include <random>
#include <vector>

#include "anisoshape/forms.hpp"
#include "anisoshape/geometry.hpp"

namespace testing_support {

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(0x5EED);
  return g;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

inline anisoshape::HomogeneousForm random_form(int m, double scale = 1.0) {
  std::vector<double> c(static_cast<std::size_t>(m) + 1);
  for (double& a : c) a = uniform(-scale, scale);
  return anisoshape::HomogeneousForm(c);
}

/// Random map with singular values in [1/k, k] and random rotations.
inline anisoshape::LinearMap2 random_map(double k = 2.0) {
  const double s1 = std::exp(uniform(-std::log(k), std::log(k)));
  const double s2 = std::exp(uniform(-std::log(k), std::log(k)));
  anisoshape::LinearMap2 d = anisoshape::LinearMap2::Zero();
  d(0, 0) = s1;
  d(1, 1) = uniform(0, 1) < 0.5 ? s2 : -s2;
  return anisoshape::rotation(uniform(0, 6.283185307179586)) * d * anisoshape::rotation(uniform(0, 6.283185307179586));
}

inline anisoshape::Triangle random_triangle() {
  for (;;) {
    anisoshape::Triangle t(anisoshape::Point2(uniform(-1, 1), uniform(-1, 1)),
                           anisoshape::Point2(uniform(-1, 1), uniform(-1, 1)),
                           anisoshape::Point2(uniform(-1, 1), uniform(-1, 1)));
    if (t.area() > 0.05) {
      if (t.signed_area() < 0) std::swap(t.v[1], t.v[2]);
      return t;
    }
  }
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace testing_support
