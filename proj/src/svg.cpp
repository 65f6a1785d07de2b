#include "anisoshape/svg.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "anisoshape/shapefn.hpp"

namespace anisoshape {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

SymMetric2 levelset_metric(const HomogeneousForm& pi, double alpha) {
  if (pi.degree() == 2) return hmatrix2_constrained(pi, alpha);
  if (pi.degree() == 3) return hmatrix3_constrained(pi, alpha);
  const EllipseResult e = shape_ellipse(pi);
  return SymMetric2::from_matrix(e.h);
}

}  // namespace

SvgScene::SvgScene(double x0, double y0, double x1, double y1, int width)
    : x0_(x0), y0_(y0), x1_(x1), y1_(y1), width_(width) {
  if (!(x1 > x0) || !(y1 > y0) || width < 1) throw std::invalid_argument("invalid SVG viewport");
  scale_ = width / (x1 - x0);
  height_ = std::max(1, static_cast<int>(std::lround((y1 - y0) * scale_)));
}

double SvgScene::sx(double x) const { return (x - x0_) * scale_; }
double SvgScene::sy(double y) const { return (y1_ - y) * scale_; }

void SvgScene::add_segments(const std::vector<std::array<Point2, 2>>& segments, const std::string& stroke,
                            double stroke_width) {
  if (segments.empty()) return;
  std::string d;
  for (const auto& s : segments) {
    d += "M" + fmt(sx(s[0].x())) + " " + fmt(sy(s[0].y())) + "L" + fmt(sx(s[1].x())) + " " + fmt(sy(s[1].y()));
  }
  items_.push_back("<path d=\"" + d + "\" fill=\"none\" stroke=\"" + escape(stroke) + "\" stroke-width=\"" +
                   fmt(stroke_width) + "\"/>");
}

void SvgScene::add_polygon(const std::vector<Point2>& vertices, const std::string& stroke, const std::string& fill,
                           double stroke_width) {
  std::string pts;
  for (const auto& v : vertices) pts += (pts.empty() ? "" : " ") + fmt(sx(v.x())) + "," + fmt(sy(v.y()));
  items_.push_back("<polygon points=\"" + pts + "\" fill=\"" + escape(fill) + "\" stroke=\"" + escape(stroke) +
                   "\" stroke-width=\"" + fmt(stroke_width) + "\"/>");
}

void SvgScene::add_ellipse(const SymMetric2& h, const Point2& center, const std::string& stroke,
                           double stroke_width) {
  const auto ev = h.eigenvalues();
  if (!(ev[0] > 0)) throw std::invalid_argument("ellipse matrix must be positive definite");
  Eigen::SelfAdjointEigenSolver<LinearMap2> es(h.matrix());
  const Point2 major = es.eigenvectors().col(0);
  // SVG rotation is clockwise in screen space, which flips y.
  const double angle = -std::atan2(major.y(), major.x()) * 180.0 / M_PI;
  items_.push_back("<ellipse cx=\"" + fmt(sx(center.x())) + "\" cy=\"" + fmt(sy(center.y())) + "\" rx=\"" +
                   fmt(scale_ / std::sqrt(ev[0])) + "\" ry=\"" + fmt(scale_ / std::sqrt(ev[1])) +
                   "\" transform=\"rotate(" + fmt(angle) + " " + fmt(sx(center.x())) + " " + fmt(sy(center.y())) +
                   ")\" fill=\"none\" stroke=\"" + escape(stroke) + "\" stroke-width=\"" + fmt(stroke_width) + "\"/>");
}

void SvgScene::add_label(const Point2& at, const std::string& text, const std::string& color) {
  items_.push_back("<text x=\"" + fmt(sx(at.x())) + "\" y=\"" + fmt(sy(at.y())) +
                   "\" font-family=\"sans-serif\" font-size=\"14\" fill=\"" + escape(color) + "\">" + escape(text) +
                   "</text>");
}

std::string SvgScene::str() const {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width_ << "\" height=\"" << height_
     << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << width_ << "\" height=\"" << height_ << "\" fill=\"white\"/>\n";
  for (const auto& item : items_) os << item << "\n";
  os << "</svg>\n";
  return os.str();
}

void SvgScene::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << str();
}

SvgScene plot_levelset(const HomogeneousForm& pi, const std::vector<double>& alphas, int grid) {
  if (pi.is_zero()) throw std::invalid_argument("plot_levelset needs a nonzero form");
  if (grid < 2) throw std::invalid_argument("levelset grid must be at least 2");
  std::vector<SymMetric2> metrics;
  double reach = 0.0;
  for (double a : alphas) {
    metrics.push_back(levelset_metric(pi, a));
    reach = std::max(reach, 1.0 / std::sqrt(metrics.back().min_eigenvalue()));
  }
  if (!(reach > 0) || !std::isfinite(reach)) reach = 1.0 / std::pow(coeff_norm(pi), 1.0 / pi.degree());
  const double r = 1.4 * reach;
  SvgScene scene(-r, -r, r, r, 800);

  // Marching squares on g = |pi| - 1.
  const double h = 2 * r / grid;
  std::vector<double> g(static_cast<std::size_t>(grid + 1) * (grid + 1));
  auto at = [&](int i, int j) -> double& { return g[static_cast<std::size_t>(j) * (grid + 1) + i]; };
  auto point = [&](int i, int j) { return Point2(-r + i * h, -r + j * h); };
  for (int j = 0; j <= grid; ++j)
    for (int i = 0; i <= grid; ++i) at(i, j) = std::abs(pi(point(i, j))) - 1.0;
  std::vector<std::array<Point2, 2>> segments;
  for (int j = 0; j < grid; ++j) {
    for (int i = 0; i < grid; ++i) {
      const std::array<std::array<int, 2>, 4> c{{{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}}};
      std::vector<Point2> cross;
      for (int e = 0; e < 4; ++e) {
        const auto [ia, ja] = c[e];
        const auto [ib, jb] = c[(e + 1) % 4];
        const double va = at(ia, ja), vb = at(ib, jb);
        if ((va < 0) == (vb < 0)) continue;
        const double t = va / (va - vb);
        cross.push_back(point(ia, ja) + t * (point(ib, jb) - point(ia, ja)));
      }
      if (cross.size() == 2) {
        segments.push_back({cross[0], cross[1]});
      } else if (cross.size() == 4) {
        // Saddle cell: connect according to the sign at the center.
        const double center = std::abs(pi(point(i, j) + Point2(0.5 * h, 0.5 * h))) - 1.0;
        if ((center < 0) == (at(i, j) < 0)) {
          segments.push_back({cross[0], cross[3]});
          segments.push_back({cross[1], cross[2]});
        } else {
          segments.push_back({cross[0], cross[1]});
          segments.push_back({cross[2], cross[3]});
        }
      }
    }
  }
  scene.add_segments({{Point2(-r, 0), Point2(r, 0)}, {Point2(0, -r), Point2(0, r)}}, "#bbbbbb", 0.5);
  scene.add_segments(segments, "black", 1.5);
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  for (std::size_t k = 0; k < metrics.size(); ++k) {
    const std::string color = palette[k % 6];
    scene.add_ellipse(metrics[k], Point2::Zero(), color);
    char label[64];
    std::snprintf(label, sizeof label, "alpha = %g", alphas[k]);
    scene.add_label(Point2(-r + 0.05 * r, r - (0.1 + 0.08 * static_cast<double>(k)) * r), label, color);
  }
  scene.add_label(Point2(-r + 0.05 * r, -r + 0.05 * r), "|pi| = 1, pi = " + pi.to_string());
  return scene;
}

SvgScene plot_mesh(const Mesh& mesh, const std::vector<char>& boundary) {
  if (mesh.num_vertices() == 0) throw std::invalid_argument("plot_mesh of an empty mesh");
  if (!boundary.empty() && boundary.size() != mesh.num_triangles()) {
    throw std::invalid_argument("boundary flags must match the triangle count");
  }
  Eigen::AlignedBox2d box;
  for (const auto& v : mesh.vertices) box.extend(v);
  const double pad = 0.02 * box.diagonal().norm();
  SvgScene scene(box.min().x() - pad, box.min().y() - pad, box.max().x() + pad, box.max().y() + pad, 800);
  for (std::size_t t = 0; t < boundary.size(); ++t) {
    if (!boundary[t]) continue;
    const Triangle tri = mesh.triangle(t);
    scene.add_polygon({tri.v[0], tri.v[1], tri.v[2]}, "none", "#ffd8a8", 0.0);
  }
  std::vector<std::array<Point2, 2>> segments;
  for (const auto& e : mesh_edges(mesh)) segments.push_back({mesh.vertices[e.a], mesh.vertices[e.b]});
  scene.add_segments(segments, "#204080", 0.4);
  return scene;
}

}  // namespace anisoshape
