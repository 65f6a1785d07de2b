#pragma once

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anisoshape/geometry.hpp"

namespace anisoshape {

/// Homogeneous binary form of degree m,
///   pi(x, y) = sum_i a_i x^i y^(m-i),   i = 0..m.
/// Coefficients are stored in this plain (unweighted) convention.
class HomogeneousForm {
 public:
  HomogeneousForm() = default;
  /// Degree is coeffs.size() - 1; throws unless size >= 2 and all entries finite.
  explicit HomogeneousForm(std::vector<double> coeffs);
  static HomogeneousForm zero(int degree);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const { return coeffs_; }
  double operator[](int i) const { return coeffs_[static_cast<std::size_t>(i)]; }

  double operator()(double x, double y) const;
  double operator()(const Point2& z) const { return (*this)(z.x(), z.y()); }

  bool is_zero() const;

  HomogeneousForm operator*(double s) const;
  HomogeneousForm operator+(const HomogeneousForm& o) const;
  HomogeneousForm operator-(const HomogeneousForm& o) const;
  bool operator==(const HomogeneousForm&) const = default;

  /// Parses "m:a_0,a_1,...,a_m".
  static HomogeneousForm parse(std::string_view token);
  std::string to_string() const;

 private:
  std::vector<double> coeffs_;
};

inline HomogeneousForm operator*(double s, const HomogeneousForm& p) { return p * s; }

inline double evaluate(const HomogeneousForm& pi, const Point2& z) { return pi(z); }

/// (pi o phi)(z) = pi(phi z).
HomogeneousForm compose(const HomogeneousForm& pi, const LinearMap2& phi);

/// max_i |a_i|.
double coeff_norm(const HomogeneousForm& pi);

/// ac - b^2 for pi = a x^2 + 2b xy + c y^2.
double det2(const HomogeneousForm& pi);

/// b^2c^2 - 4ac^3 - 4b^3d + 18abcd - 27a^2d^2 for pi = a x^3 + b x^2y + c xy^2 + d y^3.
double disc3(const HomogeneousForm& pi);

/// Product of linear factors: lambda * y^k * prod_i (x - r_i y).
struct RootSet {
  double leading = 0.0;
  std::vector<std::complex<double>> roots;
  int divisible_by_y = 0;

  /// Expands the factorization back to plain coefficients of degree
  /// roots.size() + divisible_by_y.
  HomogeneousForm reconstruct() const;
};

/// Companion-matrix root extraction. Throws on the zero form.
RootSet roots(const HomogeneousForm& pi);

/// Largest number of roots (projective, the factor y counting as the root at
/// infinity) that coincide up to `tol` in the chordal metric.
int multiplicity_class(const HomogeneousForm& pi, double tol = 1e-6);

/// A root cluster: `size` roots that coincide up to the clustering tolerance.
/// `center` is an affine root r (x - r y) or, when `at_infinity`, the factor y.
struct RootCluster {
  std::complex<double> center;
  bool at_infinity = false;
  int size = 1;
};

/// Groups the roots of pi into clusters of numerically coincident roots.
/// Cluster centers are accurate to roughly machine precision even when the
/// individual companion-matrix roots of a multiple root are not.
std::vector<RootCluster> root_clusters(const HomogeneousForm& pi, double tol = 1e-6);

/// floor(m/2) + 1: a root of at least this multiplicity makes the shape function vanish.
inline int null_multiplicity(int m) { return m / 2 + 1; }

/// Converts partial derivatives d^m f / dx^k dy^(m-k), k = 0..m, into the
/// plain-coefficient form d^m f / m! = sum_k (d^m f / dx^k dy^(m-k)) x^k/k! y^(m-k)/(m-k)!.
HomogeneousForm taylor_form(std::span<const double> partials);

/// Cubic given as a x^3 + 3b x^2y + 3c xy^2 + d y^3.
HomogeneousForm cubic_from_binomial(double a, double b, double c, double d);

/// Quartic given as a x^4 + 4b x^3y + 6c x^2y^2 + 4d xy^3 + e y^4; returns (a, b, c, d, e).
std::array<double, 5> quartic_binomial_coeffs(const HomogeneousForm& pi);

}  // namespace anisoshape
