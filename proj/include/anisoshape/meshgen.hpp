#pragma once

#include <vector>

#include "anisoshape/forms.hpp"
#include "anisoshape/geometry.hpp"
#include "anisoshape/lagrange.hpp"
#include "anisoshape/mesh.hpp"

namespace anisoshape {

/// n x n grid split into 2 n^2 triangles for axis rectangles; otherwise an
/// ear-clipped Delaunay triangulation of the polygon, red-refined until every
/// diameter is at most diam(domain) / n.
Mesh uniform_mesh(const Polygon& domain, int n);

/// Conforming mesh of the domain with all diameters <= r.
Mesh macro_mesh(const Polygon& domain, double r);

/// Optimal tile of one convex macro cell and its lattice.
struct MacroPatch {
  /// Counterclockwise convex macro cell (a macro triangle or the whole convex domain).
  std::vector<Point2> cell;
  Point2 center = Point2::Zero();
  HomogeneousForm form;
  /// Tempered shape function K_M at the centroid, and the floored value used for
  /// scaling (at least 1e-4 ||pi||, raised further by adapt_mesh when the tile
  /// would exceed half the macro radius).
  double k = 0.0;
  double k_eff = 0.0;
  /// Unit-area oracle minimizer centered at the origin.
  Triangle shape;
  /// T_R = s k_eff^{-q/2} shape, translated to the cell centroid.
  Triangle tile;
  /// T'_R = c - T_R; tile and companion form the parallelogram with sides a, b.
  Triangle companion;
  Point2 a = Point2::Zero(), b = Point2::Zero();
};

struct PatchPlan {
  Mesh macros;
  int m = 2;
  double p = 2.0;
  double cap = 16.0;
  double s = 1.0;
  std::vector<MacroPatch> patches;

  /// 1/q = m/2 + 1/p.
  double q() const;
  /// s^{-2} sum_R |R| k_eff^q.
  double predicted_count() const;
  /// max_R diam(T_R) / s.
  double c_a() const;
};

/// One patch per macro triangle. Shape-oracle results are cached per form.
PatchPlan build_patch_plan(const ScalarField& f, const Mesh& macros, int m, double p, double cap, double s);
/// Same with arbitrary convex cells partitioning the domain; `macros` is left empty.
PatchPlan build_patch_plan(const ScalarField& f, const std::vector<std::vector<Point2>>& cells, int m, double p,
                           double cap, double s);

struct AdaptOptions {
  double cap = 16.0;
  /// Count-correction passes on s.
  int max_iterations = 6;
  /// Accepted relative deviation from the target count.
  double count_tolerance = 0.05;
  /// Fixed macro radius; 0 selects it from the variation of K over the domain.
  double macro_radius = 0.0;
  /// Use a convex domain as its own single macro cell when one division suffices.
  bool whole_domain_cell = true;
};

struct AdaptResult {
  Mesh mesh;
  PatchPlan plan;
  /// Per output triangle: true when it comes from a boundary cell T cap R.
  std::vector<char> boundary;
  std::size_t interior_count = 0;
  /// Lattice tiles kept in each macro cell.
  std::vector<std::size_t> macro_tiles;
  std::size_t boundary_count = 0;
  double r = 0.0;
  int iterations = 0;
  /// sup diam(T) * sqrt(N).
  double admissibility = 0.0;
};

/// Macro-patch tiling with per-cell Delaunay conformization in the lattice metric. Requires p < inf and target_n >= 20.
AdaptResult adapt_mesh_full(const ScalarField& f, const Polygon& domain, int m, double p, int target_n,
                            const AdaptOptions& options = {});
Mesh adapt_mesh(const ScalarField& f, const Polygon& domain, int m, double p, int target_n, double cap = 16.0);

/// Tiles the patches of a plan and conformizes boundary cells.
AdaptResult assemble_patches(const PatchPlan& plan);

struct EquidistributionReport {
  /// e_T(f) per triangle.
  std::vector<double> errors;
  double p10 = 0.0;
  double p90 = 0.0;
  /// p90 / p10.
  double ratio = 0.0;
  /// sup diam(T) * sqrt(N).
  double admissibility = 0.0;
};

EquidistributionReport equidistribution_report(const ScalarField& f, const Mesh& mesh, int m, double p);

}  // namespace anisoshape
