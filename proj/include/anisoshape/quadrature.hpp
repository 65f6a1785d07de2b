#pragma once

#include <vector>

#include "anisoshape/geometry.hpp"

namespace anisoshape {

/// Quadrature on the reference triangle conv{(0,0),(1,0),(0,1)}; weights sum to 1/2.
struct QuadRule {
  std::vector<Point2> points;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [0, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int n);

/// Collapsed (Duffy) tensor Gauss rule, exact for polynomials of total degree <= `degree`.
const QuadRule& triangle_rule(int degree);

/// Centroids of the n^2 congruent sub-triangles of the uniform n-lattice,
/// each weighted by its area.
const QuadRule& lattice_centroid_rule(int n);

/// Points (i/n, j/n), i + j <= n.
const std::vector<Point2>& lattice_points(int n);

}  // namespace anisoshape
