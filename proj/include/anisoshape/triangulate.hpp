#pragma once

#include <array>
#include <span>
#include <vector>

#include "anisoshape/geometry.hpp"
#include "anisoshape/mesh.hpp"

namespace anisoshape {

using TriangleIds = std::array<int, 3>;

/// Ear-clipping triangulation of a simple counterclockwise loop of point ids.
/// Every loop vertex, including collinear ones, becomes a mesh vertex.
/// Throws std::runtime_error if no valid ear is found.
std::vector<TriangleIds> triangulate_polygon(std::span<const Point2> points, std::span<const int> loop);

/// Lawson flips toward the Delaunay triangulation. Edges used by a single
/// triangle are constrained and never flipped.
void delaunay_flip(std::span<const Point2> points, std::vector<TriangleIds>& triangles);

/// Inserts points lying strictly inside a triangulated region one at a time,
/// keeping it constrained Delaunay. Boundary edges are never flipped.
void delaunay_insert(std::span<const Point2> points, std::vector<TriangleIds>& triangles, std::span<const int> ids);

/// Splits every triangle into four at its edge midpoints.
Mesh red_refine(const Mesh& mesh);

}  // namespace anisoshape
