#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace anisoshape {

using Point2 = Eigen::Vector2d;
/// 2x2 real matrix acting on points by z -> phi * z and on forms by composition.
using LinearMap2 = Eigen::Matrix2d;

LinearMap2 rotation(double theta);

/// Twice the signed area of (a, b, c); positive for counterclockwise order.
inline double orient2d(const Point2& a, const Point2& b, const Point2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

struct Triangle {
  std::array<Point2, 3> v;

  Triangle() = default;
  Triangle(Point2 a, Point2 b, Point2 c) : v{a, b, c} {}

  double signed_area() const { return 0.5 * orient2d(v[0], v[1], v[2]); }
  double area() const;
  Point2 barycenter() const { return (v[0] + v[1] + v[2]) / 3.0; }
  double diameter() const;
  /// Smallest altitude; zero for degenerate triangles.
  double min_altitude() const;

  /// Columns are v1 - v0 and v2 - v0.
  LinearMap2 edge_matrix() const;

  Triangle translated(const Point2& h) const;
  Triangle transformed(const LinearMap2& phi) const;
  Triangle scaled(double t) const;
  /// Point reflection through the origin, z -> -z.
  Triangle negated() const;

  /// Throws std::invalid_argument if |signed area| <= tol * diam^2.
  void require_nondegenerate(double tol = 1e-14) const;
};

/// Unit-area equilateral triangle centered at the origin with a horizontal base.
Triangle unit_equilateral();

/// Counterclockwise simple polygon.
class Polygon {
 public:
  Polygon() = default;
  /// Reorders clockwise input; throws if fewer than 3 vertices, zero area,
  /// or self-intersecting.
  explicit Polygon(std::vector<Point2> vertices);

  static Polygon rectangle(double x0, double y0, double x1, double y1);
  static Polygon unit_square() { return rectangle(0.0, 0.0, 1.0, 1.0); }

  std::span<const Point2> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point2& operator[](std::size_t i) const { return vertices_[i]; }

  double area() const;
  double diameter() const;
  bool is_convex() const;
  /// Axis-aligned rectangle test (4 vertices, edges parallel to axes).
  bool is_axis_rectangle() const;
  bool contains(const Point2& p) const;
  std::array<double, 4> bbox() const;

 private:
  std::vector<Point2> vertices_;
};

/// Clips a convex polygon against a counterclockwise convex polygon.
std::vector<Point2> clip_convex(std::span<const Point2> subject, std::span<const Point2> clip);

double polygon_signed_area(std::span<const Point2> loop);

}  // namespace anisoshape
