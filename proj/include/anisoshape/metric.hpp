#pragma once

#include <string>
#include <vector>

#include "anisoshape/forms.hpp"
#include "anisoshape/geometry.hpp"
#include "anisoshape/lagrange.hpp"

namespace anisoshape {

/// Symmetric 2x2 matrix H describing the ellipse {z : <Hz, z> <= 1}.
struct SymMetric2 {
  double h11 = 1.0, h12 = 0.0, h22 = 1.0;

  SymMetric2() = default;
  SymMetric2(double a, double b, double c) : h11(a), h12(b), h22(c) {}
  static SymMetric2 from_matrix(const LinearMap2& m);
  static SymMetric2 identity(double s = 1.0) { return {s, 0.0, s}; }

  LinearMap2 matrix() const;
  double det() const { return h11 * h22 - h12 * h12; }
  double trace() const { return h11 + h22; }
  /// Eigenvalues, ascending.
  std::array<double, 2> eigenvalues() const;
  double min_eigenvalue() const { return eigenvalues()[0]; }
  /// <Hu, u>.
  double quad(const Point2& u) const { return h11 * u.x() * u.x() + 2 * h12 * u.x() * u.y() + h22 * u.y() * u.y(); }
  /// pi / sqrt(det); infinite when semidefinite.
  double ellipse_area() const;
  bool is_psd(double rel_tol = 1e-12) const;
  SymMetric2 operator*(double s) const { return {h11 * s, h12 * s, h22 * s}; }
  /// phi^T H phi.
  SymMetric2 congruence(const LinearMap2& phi) const;
  double distance(const SymMetric2& o) const;
};

struct CubicNormalization {
  LinearMap2 phi = LinearMap2::Identity();
  int disc_sign = 1;
  /// x(x^2 - 3y^2) for disc > 0, x(x^2 + 3y^2) for disc < 0.
  HomogeneousForm normal_form;
};

/// phi with pi o phi = x(x^2 -/+ 3y^2); throws if disc(pi) = 0.
CubicNormalization normalize_cubic(const HomogeneousForm& pi);

/// Maximal ellipse inside {|pi| <= 1} for a quadratic: U^T |D| U.
SymMetric2 hmatrix2(const HomogeneousForm& pi);

/// Maximal ellipse inside {|pi| <= 1} for a cubic with disc != 0.
SymMetric2 hmatrix3(const HomogeneousForm& pi);

struct RegimeThresholds {
  double mu = 0.0;
  double alpha_star = 0.0;
  double beta = 0.0;
  /// Rotation taking z_pi to the positive x-axis.
  LinearMap2 u_pi = LinearMap2::Identity();
  /// Contact point: |pi(z_pi)| = 1 and |z_pi| = mu^{-1/2}.
  Point2 z_pi = Point2::Zero();
};

RegimeThresholds regime_thresholds(const HomogeneousForm& pi);

struct ConstrainedMetric {
  SymMetric2 h;
  /// 1: alpha >= mu, 2: alpha_pi <= alpha < mu, 3: beta <= alpha < alpha_pi, 4: alpha < beta.
  int regime = 0;
  RegimeThresholds thresholds;
  /// Regime 3 optimum found by the direct rotation search rather than a quadri-tangent family.
  bool fallback = false;
};

/// Largest ellipse inside {|pi| <= 1} whose matrix satisfies H >= alpha Id.
ConstrainedMetric hmatrix3_constrained_full(const HomogeneousForm& pi, double alpha);
SymMetric2 hmatrix3_constrained(const HomogeneousForm& pi, double alpha);

/// U^T diag(max(|l1|, alpha), max(|l2|, alpha)) U.
SymMetric2 hmatrix2_constrained(const HomogeneousForm& pi, double alpha);

/// min over unit u of <Hu,u> / |pi(u)|^{2/m} on 720 directions (>= 1 when E(H) lies in the level set).
double levelset_margin(const SymMetric2& h, const HomogeneousForm& pi);

struct MetricSample {
  SymMetric2 h;
  HomogeneousForm form;
  /// Local scale alpha_z; zero when the unscaled ellipse is unbounded.
  double alpha_z = 0.0;
  bool degenerate = false;
};

/// h(z) = alpha_z^{-2} h_{pi_z, floor}, alpha_z = nu^{p/(mp+2)} |E_z|^{-1/(mp+2)}.
class MetricField {
 public:
  /// alpha_floor < 0 selects the default 1e-4 * max ||pi_z||^{2/m} over a 32x32 sample of the domain.
  MetricField(ScalarField f, Polygon domain, int m, double p, double nu, double alpha_floor = -1.0);

  MetricSample sample(const Point2& z) const;
  SymMetric2 operator()(const Point2& z) const { return sample(z).h; }

  int degree() const { return m_; }
  double p() const { return p_; }
  double nu() const { return nu_; }
  double alpha_floor() const { return floor_; }
  const Polygon& domain() const { return domain_; }
  double fd_step() const { return fd_step_; }

 private:
  ScalarField f_;
  Polygon domain_;
  int m_;
  double p_;
  double nu_;
  double floor_;
  double fd_step_;
};

/// Uniform grid x points over the domain bounding box, keeping points inside the domain.
std::vector<Point2> domain_grid(const Polygon& domain, int n);

}  // namespace anisoshape
