#pragma once

#include <string>
#include <vector>

#include "anisoshape/forms.hpp"
#include "anisoshape/geometry.hpp"
#include "anisoshape/mesh.hpp"
#include "anisoshape/metric.hpp"

namespace anisoshape {

/// Minimal SVG 1.1 writer in world coordinates (y up).
class SvgScene {
 public:
  /// Viewport [x0, x1] x [y0, y1] drawn on a canvas `width` pixels wide.
  SvgScene(double x0, double y0, double x1, double y1, int width = 800);

  /// Line segments as one path; each entry is a pair of endpoints.
  void add_segments(const std::vector<std::array<Point2, 2>>& segments, const std::string& stroke,
                    double stroke_width = 1.0);
  void add_polygon(const std::vector<Point2>& vertices, const std::string& stroke, const std::string& fill,
                   double stroke_width = 1.0);
  /// Ellipse {<H(z - c), z - c> <= 1}.
  void add_ellipse(const SymMetric2& h, const Point2& center, const std::string& stroke, double stroke_width = 1.5);
  void add_label(const Point2& at, const std::string& text, const std::string& color = "black");

  std::string str() const;
  void save(const std::string& path) const;

 private:
  double sx(double x) const;
  double sy(double y) const;

  double x0_, y0_, x1_, y1_;
  int width_, height_;
  double scale_;
  std::vector<std::string> items_;
};

/// Contour |pi| = 1 by marching squares on a grid x grid lattice over a square
/// view, plus the ellipses E(h_{pi,alpha}) (constrained maximal ellipses for
/// m = 2, 3; the unconstrained maximal ellipse for other degrees).
SvgScene plot_levelset(const HomogeneousForm& pi, const std::vector<double>& alphas, int grid = 512);

/// Triangle edges; when `boundary` flags are given, flagged triangles are shaded.
SvgScene plot_mesh(const Mesh& mesh, const std::vector<char>& boundary = {});

}  // namespace anisoshape
