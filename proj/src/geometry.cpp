#include "anisoshape/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace anisoshape {

LinearMap2 rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  LinearMap2 r;
  r << c, -s, s, c;
  return r;
}

double Triangle::area() const { return std::abs(signed_area()); }

double Triangle::diameter() const {
  return std::max({(v[1] - v[0]).norm(), (v[2] - v[1]).norm(), (v[0] - v[2]).norm()});
}

double Triangle::min_altitude() const {
  const double d = diameter();
  return d > 0.0 ? 2.0 * area() / d : 0.0;
}

LinearMap2 Triangle::edge_matrix() const {
  LinearMap2 j;
  j.col(0) = v[1] - v[0];
  j.col(1) = v[2] - v[0];
  return j;
}

Triangle Triangle::translated(const Point2& h) const { return {v[0] + h, v[1] + h, v[2] + h}; }

Triangle Triangle::transformed(const LinearMap2& phi) const {
  return {phi * v[0], phi * v[1], phi * v[2]};
}

Triangle Triangle::scaled(double t) const { return {t * v[0], t * v[1], t * v[2]}; }

Triangle Triangle::negated() const { return {-v[0], -v[1], -v[2]}; }

void Triangle::require_nondegenerate(double tol) const {
  const double d = diameter();
  if (!(std::abs(signed_area()) > tol * d * d)) {
    throw std::invalid_argument("degenerate triangle");
  }
}

Triangle unit_equilateral() {
  // side^2 * sqrt(3)/4 = 1
  const double side = std::sqrt(4.0 / std::sqrt(3.0));
  const double h = side * std::sqrt(3.0) / 2.0;
  return {Point2(-side / 2.0, -h / 3.0), Point2(side / 2.0, -h / 3.0), Point2(0.0, 2.0 * h / 3.0)};
}

double polygon_signed_area(std::span<const Point2> loop) {
  double a = 0.0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& p = loop[i];
    const Point2& q = loop[(i + 1) % n];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

namespace {

bool segments_cross(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double d1 = orient2d(a, b, c);
  const double d2 = orient2d(a, b, d);
  const double d3 = orient2d(c, d, a);
  const double d4 = orient2d(c, d, b);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace

Polygon::Polygon(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
  for (const auto& p : vertices_) {
    if (!std::isfinite(p.x()) || !std::isfinite(p.y())) {
      throw std::invalid_argument("polygon vertex is not finite");
    }
  }
  double a = polygon_signed_area(vertices_);
  if (a < 0) {
    std::reverse(vertices_.begin(), vertices_.end());
    a = -a;
  }
  const double d = diameter();
  if (!(a > 1e-14 * d * d)) throw std::invalid_argument("degenerate polygon");
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_cross(vertices_[i], vertices_[(i + 1) % n], vertices_[j], vertices_[(j + 1) % n])) {
        throw std::invalid_argument("self-intersecting polygon");
      }
    }
  }
}

Polygon Polygon::rectangle(double x0, double y0, double x1, double y1) {
  return Polygon({Point2(x0, y0), Point2(x1, y0), Point2(x1, y1), Point2(x0, y1)});
}

double Polygon::area() const { return polygon_signed_area(vertices_); }

double Polygon::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < vertices_.size(); ++j)
      d = std::max(d, (vertices_[i] - vertices_[j]).norm());
  return d;
}

bool Polygon::is_convex() const {
  const std::size_t n = vertices_.size();
  const double scale = diameter();
  for (std::size_t i = 0; i < n; ++i) {
    if (orient2d(vertices_[i], vertices_[(i + 1) % n], vertices_[(i + 2) % n]) < -1e-14 * scale * scale) {
      return false;
    }
  }
  return true;
}

bool Polygon::is_axis_rectangle() const {
  if (vertices_.size() != 4) return false;
  for (std::size_t i = 0; i < 4; ++i) {
    const Point2 e = vertices_[(i + 1) % 4] - vertices_[i];
    if (e.x() != 0.0 && e.y() != 0.0) return false;
  }
  return true;
}

bool Polygon::contains(const Point2& p) const {
  bool inside = false;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = vertices_[i];
    const Point2& b = vertices_[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

std::array<double, 4> Polygon::bbox() const {
  std::array<double, 4> b{vertices_[0].x(), vertices_[0].y(), vertices_[0].x(), vertices_[0].y()};
  for (const auto& p : vertices_) {
    b[0] = std::min(b[0], p.x());
    b[1] = std::min(b[1], p.y());
    b[2] = std::max(b[2], p.x());
    b[3] = std::max(b[3], p.y());
  }
  return b;
}

std::vector<Point2> clip_convex(std::span<const Point2> subject, std::span<const Point2> clip) {
  std::vector<Point2> out(subject.begin(), subject.end());
  const std::size_t nc = clip.size();
  for (std::size_t k = 0; k < nc && !out.empty(); ++k) {
    const Point2& a = clip[k];
    const Point2& b = clip[(k + 1) % nc];
    std::vector<Point2> in;
    in.swap(out);
    const std::size_t n = in.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2& p = in[i];
      const Point2& q = in[(i + 1) % n];
      const double sp = orient2d(a, b, p);
      const double sq = orient2d(a, b, q);
      if (sp >= 0) out.push_back(p);
      if ((sp >= 0) != (sq >= 0)) {
        const double t = sp / (sp - sq);
        out.push_back(p + t * (q - p));
      }
    }
  }
  return out;
}

}  // namespace anisoshape
