#include "anisoshape/triangulate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace anisoshape {

namespace {

// Points strictly inside or on the closed triangle (a, b, c), counterclockwise.
bool in_closed_triangle(const Point2& p, const Point2& a, const Point2& b, const Point2& c, double tol) {
  return orient2d(a, b, p) >= -tol && orient2d(b, c, p) >= -tol && orient2d(c, a, p) >= -tol;
}

double incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
  const double ad = adx * adx + ady * ady, bd = bdx * bdx + bdy * bdy, cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

}  // namespace

std::vector<TriangleIds> triangulate_polygon(std::span<const Point2> points, std::span<const int> loop) {
  std::vector<int> ring(loop.begin(), loop.end());
  std::vector<TriangleIds> out;
  if (ring.size() < 3) return out;
  double scale = 0.0;
  for (int id : ring) scale = std::max(scale, (points[id] - points[ring[0]]).squaredNorm());
  const double tol = 1e-13 * scale;
  while (ring.size() > 3) {
    const std::size_t n = ring.size();
    std::size_t best = n;
    double best_quality = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int ia = ring[(i + n - 1) % n], ib = ring[i], ic = ring[(i + 1) % n];
      const Point2 &a = points[ia], &b = points[ib], &c = points[ic];
      const double o = orient2d(a, b, c);
      if (o <= tol) continue;
      bool blocked = false;
      for (std::size_t j = 0; j < n && !blocked; ++j) {
        const int id = ring[j];
        if (id == ia || id == ib || id == ic) continue;
        const Point2& p = points[id];
        if (p == a || p == b || p == c) continue;
        blocked = in_closed_triangle(p, a, b, c, tol);
      }
      if (blocked) continue;
      // Prefer well-shaped ears: area over squared longest edge.
      const double e = std::max({(b - a).squaredNorm(), (c - b).squaredNorm(), (a - c).squaredNorm()});
      const double quality = o / e;
      if (quality > best_quality) {
        best_quality = quality;
        best = i;
      }
    }
    if (best == n) throw std::runtime_error("polygon triangulation found no ear");
    out.push_back({ring[(best + n - 1) % n], ring[best], ring[(best + 1) % n]});
    ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(best));
  }
  if (orient2d(points[ring[0]], points[ring[1]], points[ring[2]]) <= tol) {
    throw std::runtime_error("polygon triangulation left a degenerate triangle");
  }
  out.push_back({ring[0], ring[1], ring[2]});
  return out;
}

namespace {

// Triangles with neighbor links; nbr[t][k] lies across the edge opposite vertex k.
class Topology {
 public:
  Topology(std::span<const Point2> points, std::vector<TriangleIds> tris) : pts_(points), tri_(std::move(tris)) {
    nbr_.assign(tri_.size(), {-1, -1, -1});
    std::map<std::pair<int, int>, std::pair<int, int>> open;
    for (int t = 0; t < static_cast<int>(tri_.size()); ++t) {
      for (int k = 0; k < 3; ++k) {
        const int a = tri_[t][(k + 1) % 3], b = tri_[t][(k + 2) % 3];
        auto it = open.find({b, a});
        if (it != open.end()) {
          nbr_[t][k] = it->second.first;
          nbr_[it->second.first][it->second.second] = t;
          open.erase(it);
        } else {
          open[{a, b}] = {t, k};
        }
      }
    }
  }

  void flip_all() {
    for (int t = 0; t < static_cast<int>(tri_.size()); ++t)
      for (int k = 0; k < 3; ++k) stack_.emplace_back(t, k);
    drain();
  }

  void insert(int id) {
    const Point2& p = pts_[id];
    const int t = locate(p);
    std::array<double, 3> o{};
    for (int k = 0; k < 3; ++k) o[k] = orient2d(pts_[tri_[t][(k + 1) % 3]], pts_[tri_[t][(k + 2) % 3]], p);
    int on_edge = -1;
    for (int k = 0; k < 3; ++k) {
      const double len = (pts_[tri_[t][(k + 1) % 3]] - pts_[tri_[t][(k + 2) % 3]]).norm();
      if (o[k] <= 1e-10 * len * len) on_edge = k;
    }
    if (on_edge >= 0 && nbr_[t][on_edge] < 0) throw std::runtime_error("point inserted on a constrained edge");
    if (on_edge >= 0) {
      split_edge(t, on_edge, id);
    } else {
      split_triangle(t, id);
    }
    drain();
  }

  const std::vector<TriangleIds>& triangles() const { return tri_; }

 private:
  int locate(const Point2& p) {
    int t = last_;
    const int limit = 4 * static_cast<int>(tri_.size()) + 16;
    for (int step = 0; step < limit; ++step) {
      bool moved = false;
      for (int e = 0; e < 3 && !moved; ++e) {
        const int k = (e + step) % 3;
        const Point2 &a = pts_[tri_[t][(k + 1) % 3]], &b = pts_[tri_[t][(k + 2) % 3]];
        if (orient2d(a, b, p) < 0 && nbr_[t][k] >= 0) {
          t = nbr_[t][k];
          moved = true;
        }
      }
      if (!moved) return t;
    }
    // Walk did not settle: scan for the most containing triangle.
    int best = -1;
    double best_min = -INFINITY;
    for (int u = 0; u < static_cast<int>(tri_.size()); ++u) {
      double m = INFINITY;
      for (int k = 0; k < 3; ++k) m = std::min(m, orient2d(pts_[tri_[u][(k + 1) % 3]], pts_[tri_[u][(k + 2) % 3]], p));
      if (m > best_min) {
        best_min = m;
        best = u;
      }
    }
    return best;
  }

  void relink(int u, int from, int to) {
    if (u < 0) return;
    for (int k = 0; k < 3; ++k)
      if (nbr_[u][k] == from) nbr_[u][k] = to;
  }

  void split_triangle(int t, int p) {
    const auto [v0, v1, v2] = tri_[t];
    const auto [n0, n1, n2] = nbr_[t];
    const int t1 = static_cast<int>(tri_.size()), t2 = t1 + 1;
    tri_[t] = {p, v1, v2};
    nbr_[t] = {n0, t1, t2};
    tri_.push_back({p, v2, v0});
    nbr_.push_back({n1, t2, t});
    tri_.push_back({p, v0, v1});
    nbr_.push_back({n2, t, t1});
    relink(n1, t, t1);
    relink(n2, t, t2);
    for (int u : {t, t1, t2}) stack_.emplace_back(u, 0);
    last_ = t;
  }

  // p lies on the edge opposite vertex k of t.
  void split_edge(int t, int k, int p) {
    const int u = nbr_[t][k];
    int j = 0;
    while (nbr_[u][j] != t) ++j;
    const int a = tri_[t][k], b = tri_[t][(k + 1) % 3], c = tri_[t][(k + 2) % 3], d = tri_[u][j];
    const int n_ca = nbr_[t][(k + 1) % 3], n_ab = nbr_[t][(k + 2) % 3];
    const int n_bd = nbr_[u][(j + 1) % 3], n_dc = nbr_[u][(j + 2) % 3];
    const int t1 = static_cast<int>(tri_.size()), t3 = t1 + 1;
    tri_[t] = {p, a, b};
    nbr_[t] = {n_ab, u, t1};
    tri_.push_back({p, c, a});
    nbr_.push_back({n_ca, t, t3});
    tri_[u] = {p, b, d};
    nbr_[u] = {n_bd, t3, t};
    tri_.push_back({p, d, c});
    nbr_.push_back({n_dc, t1, u});
    relink(n_ca, t, t1);
    relink(n_dc, u, t3);
    for (int w : {t, t1, u, t3}) stack_.emplace_back(w, 0);
    last_ = t;
  }

  // Flips the edge opposite vertex k of t when it is not locally Delaunay.
  void legalize(int t, int k) {
    const int u = nbr_[t][k];
    if (u < 0) return;
    int j = 0;
    while (nbr_[u][j] != t) ++j;
    const int a = tri_[t][k], b = tri_[t][(k + 1) % 3], c = tri_[t][(k + 2) % 3], d = tri_[u][j];
    const Point2 &pa = pts_[a], &pb = pts_[b], &pc = pts_[c], &pd = pts_[d];
    const double s2 = std::max((pb - pc).squaredNorm(), (pa - pd).squaredNorm());
    if (!(incircle(pa, pb, pc, pd) > 1e-12 * s2 * s2)) return;
    if (orient2d(pa, pb, pd) <= 1e-12 * s2 || orient2d(pa, pd, pc) <= 1e-12 * s2) return;
    const int n_tb = nbr_[t][(k + 1) % 3], n_tc = nbr_[t][(k + 2) % 3];
    // In u = (d, c, b): edge (b, d) is opposite c, edge (d, c) is opposite b.
    const int n_bd = nbr_[u][(j + 1) % 3], n_dc = nbr_[u][(j + 2) % 3];
    tri_[t] = {a, b, d};
    nbr_[t] = {n_bd, u, n_tc};
    tri_[u] = {a, d, c};
    nbr_[u] = {n_dc, n_tb, t};
    relink(n_bd, u, t);
    relink(n_tb, t, u);
    stack_.emplace_back(t, 0);
    stack_.emplace_back(u, 0);
    stack_.emplace_back(t, 2);
    stack_.emplace_back(u, 1);
    ++flips_;
  }

  void drain() {
    const long limit = 64 * static_cast<long>(tri_.size()) + 1024;
    while (!stack_.empty()) {
      const auto [t, k] = stack_.back();
      stack_.pop_back();
      if (flips_ > limit + flip_base_) break;
      legalize(t, k);
    }
    stack_.clear();
    flip_base_ = flips_;
  }

  std::span<const Point2> pts_;
  std::vector<TriangleIds> tri_;
  std::vector<std::array<int, 3>> nbr_;
  std::vector<std::pair<int, int>> stack_;
  int last_ = 0;
  long flips_ = 0, flip_base_ = 0;
};

}  // namespace

void delaunay_flip(std::span<const Point2> points, std::vector<TriangleIds>& tris) {
  Topology topo(points, std::move(tris));
  topo.flip_all();
  tris = topo.triangles();
}

void delaunay_insert(std::span<const Point2> points, std::vector<TriangleIds>& tris, std::span<const int> ids) {
  if (tris.empty()) throw std::invalid_argument("delaunay_insert needs an initial triangulation");
  Topology topo(points, std::move(tris));
  topo.flip_all();
  for (int id : ids) topo.insert(id);
  tris = topo.triangles();
}

Mesh red_refine(const Mesh& mesh) {
  Mesh out;
  out.vertices = mesh.vertices;
  std::map<std::pair<int, int>, int> mid;
  auto midpoint = [&](int a, int b) {
    const auto k = a < b ? std::pair{a, b} : std::pair{b, a};
    auto it = mid.find(k);
    if (it != mid.end()) return it->second;
    const int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    mid.emplace(k, id);
    return id;
  };
  for (const auto& t : mesh.triangles) {
    const int ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
    out.triangles.push_back({t[0], ab, ca});
    out.triangles.push_back({ab, t[1], bc});
    out.triangles.push_back({ca, bc, t[2]});
    out.triangles.push_back({ab, bc, ca});
  }
  return out;
}

}  // namespace anisoshape
