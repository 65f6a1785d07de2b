#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "anisoshape/geometry.hpp"

namespace anisoshape {

struct Mesh {
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_triangles() const { return triangles.size(); }
  Triangle triangle(std::size_t t) const {
    const auto& c = triangles[t];
    return {vertices[c[0]], vertices[c[1]], vertices[c[2]]};
  }
  double area() const;
  double max_diameter() const;
};

/// Undirected edge with its incident triangles (-1 when absent).
struct MeshEdge {
  int a = -1, b = -1;
  int left = -1, right = -1;
  int count = 0;
};

/// Edges keyed by sorted endpoint pairs, in first-appearance order.
std::vector<MeshEdge> mesh_edges(const Mesh& mesh);

/// Text format: "MESH2 nv nt", nv lines "x y", nt lines "i j k" (0-based).
void write_mesh(const Mesh& mesh, std::ostream& os);
Mesh read_mesh(std::istream& is);
void save_mesh(const Mesh& mesh, const std::string& path);
Mesh load_mesh(const std::string& path);

struct ConformityReport {
  bool ok = true;
  std::vector<std::string> problems;
  std::vector<int> bad_triangles;
  std::vector<int> hanging_nodes;
  /// |sum of triangle areas - covered area| / covered area.
  double area_defect = 0.0;
};

/// Checks non-degeneracy, counterclockwise orientation, edge sharing, hanging
/// nodes and area coverage. The covered area is |domain| when given, otherwise
/// the area enclosed by the boundary edges.
ConformityReport check_conforming(const Mesh& mesh, const Polygon* domain = nullptr);

}  // namespace anisoshape
