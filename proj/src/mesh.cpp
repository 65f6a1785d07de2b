#include "anisoshape/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace anisoshape {

double Mesh::area() const {
  double a = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) a += triangle(t).area();
  return a;
}

double Mesh::max_diameter() const {
  double d = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) d = std::max(d, triangle(t).diameter());
  return d;
}

std::vector<MeshEdge> mesh_edges(const Mesh& mesh) {
  std::unordered_map<long long, int> index;
  std::vector<MeshEdge> edges;
  const long long nv = static_cast<long long>(mesh.vertices.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& c = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int a = c[k];
      const int b = c[(k + 1) % 3];
      const long long key = static_cast<long long>(std::min(a, b)) * nv + std::max(a, b);
      auto [it, fresh] = index.try_emplace(key, static_cast<int>(edges.size()));
      if (fresh) edges.push_back({std::min(a, b), std::max(a, b), -1, -1, 0});
      MeshEdge& e = edges[it->second];
      // left: triangle traversing the edge a -> b with a < b
      if (a < b) {
        e.left = static_cast<int>(t);
      } else {
        e.right = static_cast<int>(t);
      }
      ++e.count;
    }
  }
  return edges;
}

void write_mesh(const Mesh& mesh, std::ostream& os) {
  os << "MESH2 " << mesh.vertices.size() << ' ' << mesh.triangles.size() << '\n';
  char buf[96];
  for (const auto& p : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x(), p.y());
    os << buf;
  }
  for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

Mesh read_mesh(std::istream& is) {
  std::string tag;
  long long nv = -1, nt = -1;
  if (!(is >> tag >> nv >> nt) || tag != "MESH2" || nv < 0 || nt < 0) {
    throw std::runtime_error("not a MESH2 file");
  }
  Mesh m;
  m.vertices.resize(static_cast<std::size_t>(nv));
  for (auto& p : m.vertices) {
    double x, y;
    if (!(is >> x >> y)) throw std::runtime_error("truncated MESH2 vertex list");
    p = Point2(x, y);
  }
  m.triangles.resize(static_cast<std::size_t>(nt));
  for (auto& t : m.triangles) {
    if (!(is >> t[0] >> t[1] >> t[2])) throw std::runtime_error("truncated MESH2 triangle list");
    for (int k : t) {
      if (k < 0 || k >= nv) throw std::runtime_error("MESH2 vertex index out of range");
    }
  }
  return m;
}

void save_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  write_mesh(mesh, os);
}

Mesh load_mesh(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  return read_mesh(is);
}

ConformityReport check_conforming(const Mesh& mesh, const Polygon* domain) {
  ConformityReport rep;
  auto fail = [&](std::string msg) {
    rep.ok = false;
    if (rep.problems.size() < 50) rep.problems.push_back(std::move(msg));
  };
  if (mesh.triangles.empty()) {
    fail("empty mesh");
    return rep;
  }
  double bx0 = mesh.vertices[0].x(), by0 = mesh.vertices[0].y(), bx1 = bx0, by1 = by0;
  for (const auto& p : mesh.vertices) {
    bx0 = std::min(bx0, p.x());
    by0 = std::min(by0, p.y());
    bx1 = std::max(bx1, p.x());
    by1 = std::max(by1, p.y());
  }
  const double bbox = std::max(bx1 - bx0, by1 - by0);

  double area_sum = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& c = mesh.triangles[t];
    if (c[0] == c[1] || c[1] == c[2] || c[0] == c[2]) {
      fail("triangle " + std::to_string(t) + " repeats a vertex");
      rep.bad_triangles.push_back(static_cast<int>(t));
      continue;
    }
    const double a = mesh.triangle(t).signed_area();
    if (!(std::abs(a) > 1e-14 * bbox * bbox)) {
      fail("triangle " + std::to_string(t) + " is degenerate");
      rep.bad_triangles.push_back(static_cast<int>(t));
    } else if (a < 0) {
      fail("triangle " + std::to_string(t) + " is clockwise");
      rep.bad_triangles.push_back(static_cast<int>(t));
    }
    area_sum += std::abs(a);
  }

  const auto edges = mesh_edges(mesh);
  double enclosed = 0.0;
  std::vector<const MeshEdge*> boundary;
  for (const auto& e : edges) {
    if (e.count > 2 || (e.count == 2 && (e.left < 0 || e.right < 0))) {
      fail("edge " + std::to_string(e.a) + "-" + std::to_string(e.b) + " is shared inconsistently");
      if (e.left >= 0) rep.bad_triangles.push_back(e.left);
      if (e.right >= 0) rep.bad_triangles.push_back(e.right);
    }
    if (e.count == 1) {
      boundary.push_back(&e);
      const Point2& p = mesh.vertices[e.left >= 0 ? e.a : e.b];
      const Point2& q = mesh.vertices[e.left >= 0 ? e.b : e.a];
      enclosed += 0.5 * (p.x() * q.y() - q.x() * p.y());
    }
  }

  // Hanging nodes: a vertex in the relative interior of a boundary edge.
  const int g = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(mesh.vertices.size()))));
  const double cell = std::max(bbox, 1e-300) / g;
  std::unordered_map<long long, std::vector<int>> grid;
  auto key = [&](int i, int j) { return static_cast<long long>(i) * (g + 2) + j; };
  auto cell_of = [&](double v, double o) { return std::clamp(static_cast<int>((v - o) / cell), 0, g); };
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    grid[key(cell_of(mesh.vertices[v].x(), bx0), cell_of(mesh.vertices[v].y(), by0))].push_back(static_cast<int>(v));
  }
  for (const MeshEdge* e : boundary) {
    const Point2& p = mesh.vertices[e->a];
    const Point2& q = mesh.vertices[e->b];
    const double len = (q - p).norm();
    const int i0 = cell_of(std::min(p.x(), q.x()), bx0), i1 = cell_of(std::max(p.x(), q.x()), bx0);
    const int j0 = cell_of(std::min(p.y(), q.y()), by0), j1 = cell_of(std::max(p.y(), q.y()), by0);
    for (int i = i0; i <= i1; ++i) {
      for (int j = j0; j <= j1; ++j) {
        auto it = grid.find(key(i, j));
        if (it == grid.end()) continue;
        for (int v : it->second) {
          if (v == e->a || v == e->b) continue;
          const Point2& z = mesh.vertices[v];
          const double t = (z - p).dot(q - p) / (len * len);
          if (t <= 1e-9 || t >= 1.0 - 1e-9) continue;
          const double dist = std::abs(orient2d(p, q, z)) / len;
          if (dist <= 1e-9 * len) {
            fail("hanging node " + std::to_string(v) + " on edge " + std::to_string(e->a) + "-" +
                 std::to_string(e->b));
            rep.hanging_nodes.push_back(v);
          }
        }
      }
    }
  }

  // Overlap: no vertex may lie strictly inside another triangle.
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Triangle tri = mesh.triangle(t);
    const double a2 = 2.0 * tri.signed_area();
    if (!(a2 > 0)) continue;
    const double tol = 1e-9 * a2;
    double x0 = tri.v[0].x(), x1 = x0, y0 = tri.v[0].y(), y1 = y0;
    for (const auto& v : tri.v) {
      x0 = std::min(x0, v.x());
      x1 = std::max(x1, v.x());
      y0 = std::min(y0, v.y());
      y1 = std::max(y1, v.y());
    }
    for (int i = cell_of(x0, bx0); i <= cell_of(x1, bx0); ++i) {
      for (int j = cell_of(y0, by0); j <= cell_of(y1, by0); ++j) {
        auto it = grid.find(key(i, j));
        if (it == grid.end()) continue;
        for (int v : it->second) {
          const auto& c = mesh.triangles[t];
          if (v == c[0] || v == c[1] || v == c[2]) continue;
          const Point2& z = mesh.vertices[v];
          if (orient2d(tri.v[0], tri.v[1], z) > tol && orient2d(tri.v[1], tri.v[2], z) > tol &&
              orient2d(tri.v[2], tri.v[0], z) > tol) {
            fail("vertex " + std::to_string(v) + " lies inside triangle " + std::to_string(t));
            rep.bad_triangles.push_back(static_cast<int>(t));
          }
        }
      }
    }
  }

  const double covered = domain ? domain->area() : enclosed;
  rep.area_defect = covered > 0 ? std::abs(area_sum - covered) / covered : 1.0;
  if (!(rep.area_defect <= 1e-8)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "area mismatch: triangles %.12g vs covered %.12g", area_sum, covered);
    fail(buf);
  }
  std::sort(rep.bad_triangles.begin(), rep.bad_triangles.end());
  rep.bad_triangles.erase(std::unique(rep.bad_triangles.begin(), rep.bad_triangles.end()), rep.bad_triangles.end());
  std::sort(rep.hanging_nodes.begin(), rep.hanging_nodes.end());
  rep.hanging_nodes.erase(std::unique(rep.hanging_nodes.begin(), rep.hanging_nodes.end()), rep.hanging_nodes.end());
  return rep;
}

}  // namespace anisoshape
