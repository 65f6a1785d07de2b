#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "anisoshape/forms.hpp"
#include "anisoshape/geometry.hpp"
#include "anisoshape/mesh.hpp"

namespace anisoshape {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Bivariate polynomial of total degree <= degree, stored in a local affine
/// frame: q(z) = sum_{a+b<=deg} c_ab s^a t^b with (s, t) = frame * (z - origin).
class Polynomial2 {
 public:
  Polynomial2() = default;
  explicit Polynomial2(int degree);
  Polynomial2(int degree, Point2 origin, LinearMap2 frame);

  int degree() const { return degree_; }
  double& coeff(int a, int b) { return c_[index(a, b)]; }
  double coeff(int a, int b) const { return c_[index(a, b)]; }
  const Point2& origin() const { return origin_; }
  const LinearMap2& frame() const { return frame_; }

  double operator()(const Point2& z) const;
  double operator()(double x, double y) const { return (*this)(Point2(x, y)); }

  /// Same polynomial with coefficients for x^a y^b (identity frame).
  Polynomial2 expanded() const;

 private:
  std::size_t index(int a, int b) const { return static_cast<std::size_t>(a) * (degree_ + 1) + b; }
  int degree_ = 0;
  std::vector<double> c_;
  Point2 origin_ = Point2::Zero();
  LinearMap2 frame_ = LinearMap2::Identity();
};

/// A function with optional analytic m-th derivatives.
struct ScalarField {
  std::function<double(double, double)> value;
  /// Returns d^m f / dx^k dy^(m-k) for k = 0..m; may be empty.
  std::function<std::vector<double>(double, double, int)> partials;

  double operator()(double x, double y) const { return value(x, y); }
  double operator()(const Point2& z) const { return value(z.x(), z.y()); }

  /// d^m f_z / m! in plain coefficients. Uses central differences with step
  /// `fd_step` when no analytic partials are available.
  HomogeneousForm taylor(const Point2& z, int m, double fd_step = 1e-3) const;
};

/// Field of a homogeneous form with exact derivatives.
ScalarField form_field(const HomogeneousForm& pi);

/// Central-difference estimate of d^m f / dx^k dy^(m-k), k = 0..m.
std::vector<double> finite_difference_partials(const std::function<double(double, double)>& f, const Point2& z,
                                               int m, double h);

/// Nodes with barycentric coordinates in {0, 1/(m-1), ..., 1}, ordered by
/// descending barycentric index (i, j, k) lexicographically.
std::vector<Point2> lagrange_nodes(const Triangle& t, int m);

/// Interpolant of degree m-1 at the Lagrange nodes, expressed in the local
/// frame of t.
Polynomial2 interpolate(const ScalarField& v, const Triangle& t, int m);

/// ||v - I v||_{L^p(t)}; p may be kInfinity.
double local_error(const ScalarField& v, const Triangle& t, int m, double p);

/// Local error of a homogeneous form of degree m on t.
double local_error(const HomogeneousForm& pi, const Triangle& t, double p);

/// Precomputed reference-triangle error data for forms of a fixed degree and p.
/// On T with edge matrix J, e_T(pi)_p = |det J|^{1/p} * ref(pi o J).
class FormErrorKernel {
 public:
  FormErrorKernel(int m, double p);
  int degree() const { return m_; }
  double p() const { return p_; }
  double reference_error(const HomogeneousForm& pi_ref) const;
  double operator()(const HomogeneousForm& pi, const Triangle& t) const;

 private:
  int m_;
  double p_;
  std::vector<double> weights_;
  std::vector<Point2> points_;
  std::vector<double> basis_err_;  // points_.size() x (m+1), row major
};

/// Per-triangle errors in mesh order.
std::vector<double> local_errors(const ScalarField& v, const Mesh& mesh, int m, double p);

/// (sum_T e_T^p)^{1/p}, or max_T e_T when p is infinite.
double global_error(const ScalarField& v, const Mesh& mesh, int m, double p);

}  // namespace anisoshape
