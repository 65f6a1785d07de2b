#pragma once

#include <array>

#include "anisoshape/forms.hpp"
#include "anisoshape/geometry.hpp"
#include "anisoshape/lagrange.hpp"

namespace anisoshape {

/// Search settings for the tempered shape function K_M.
struct ShapeQuery {
  double p = 2.0;
  /// Diameter cap M; must be at least the diameter of the unit-area equilateral triangle.
  double cap = 16.0;
  int grid_theta1 = 24;
  int grid_theta2 = 24;
  int grid_t = 16;
  /// Number of best grid points refined by Nelder-Mead.
  int starts = 8;
  int max_evals = 1500;
  double tol = 1e-10;
};

struct ShapeResult {
  double value = 0.0;
  /// Unit-area minimizer centered at the origin with diameter <= cap.
  Triangle triangle;
  double cap = 0.0;
  bool converged = false;
  int evaluations = 0;
};

/// Shared error kernel for forms of degree m in L^p.
const FormErrorKernel& form_kernel(int m, double p);

/// Unit-area triangle R(theta1) diag(t, 1/t) R(theta2) T_eq.
Triangle sl2_triangle(double theta1, double theta2, double t);

/// Smallest t in (0, 1] keeping diam(sl2_triangle(., theta2, t)) <= cap.
double sl2_min_t(double theta2, double cap);

/// K_M(pi) = min of e_T(pi)_p over unit-area triangles with diam <= M.
ShapeResult shape_oracle(const HomogeneousForm& pi, const ShapeQuery& q = {});

/// sigma_p(sign) for m = 2 (oracle on x^2 + sign y^2) or
/// sigma*_p(sign) for m = 3 (108^{-1/4} times the oracle on x(x^2 - 3 sign y^2)).
/// Tabulated for p in {1, 2, inf}; other p are computed once on first use.
double sigma_constant(int m, int sign, double p);

/// Oracle run behind sigma_constant, with an explicit query.
double compute_sigma(int m, int sign, const ShapeQuery& q);

/// K_{2,p} = sigma_p(det) sqrt|det| and K_{3,p} = sigma*_p(disc) |disc|^{1/4};
/// zero when the invariant vanishes.
double shape_closed(const HomogeneousForm& pi, double p);

struct EllipseResult {
  /// K^E = |E|^{-m/2}; zero when the supremum is unbounded.
  double value = 0.0;
  /// Largest inscribed area found (infinite when unbounded).
  double area = 0.0;
  /// Matrix of the optimal ellipse {<Hz, z> <= 1}.
  LinearMap2 h = LinearMap2::Identity();
  /// The eigenvalue-ratio cap was active: the supremum is not attained.
  bool unbounded = false;
};

/// Largest centered ellipse inside {|pi| <= 1}, constraints on 720 directions.
EllipseResult shape_ellipse(const HomogeneousForm& pi);

/// Smallest e2 with <Hu,u> >= |pi(u)|^{2/m} for H = R^T diag(e1, e2) R, R = R(theta)
/// (infinite if no e2 works).
double ellipse_min_e2(const HomogeneousForm& pi, double theta, double e1);

/// Q_d(pi) = sum over permutations of cyc(lambda, r_sigma)^d.
double invariant_Qd(const HomogeneousForm& pi, int d);

/// max_{1 <= d <= m!} |Q_d(pi/||pi||)|^{1/(4d)} * ||pi||, for 2 <= m <= 5.
double invariant_equiv(const HomogeneousForm& pi);

/// I and J of a quartic a x^4 + 4b x^3y + 6c x^2y^2 + 4d xy^3 + e y^4.
std::array<double, 2> quartic_IJ(const HomogeneousForm& pi);

/// (|I|^3 + J^2)^{1/6}.
double invariant_equiv4(const HomogeneousForm& pi);

}  // namespace anisoshape
