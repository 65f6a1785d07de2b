#include "anisoshape/meshgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "anisoshape/parallel.hpp"
#include "anisoshape/shapefn.hpp"
#include "anisoshape/triangulate.hpp"

namespace anisoshape {

// ---------------------------------------------------------------- uniform and macro meshes

namespace {

Mesh polygon_mesh(const Polygon& domain) {
  Mesh mesh;
  mesh.vertices.assign(domain.vertices().begin(), domain.vertices().end());
  std::vector<int> loop(domain.size());
  for (std::size_t i = 0; i < loop.size(); ++i) loop[i] = static_cast<int>(i);
  mesh.triangles = triangulate_polygon(mesh.vertices, loop);
  delaunay_flip(mesh.vertices, mesh.triangles);
  return mesh;
}

Mesh rectangle_grid(const Polygon& domain, int n) {
  const auto [x0, y0, x1, y1] = domain.bbox();
  Mesh mesh;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      // Exact endpoints keep the boundary on the domain edges.
      const double x = i == n ? x1 : x0 + (x1 - x0) * i / n;
      const double y = j == n ? y1 : y0 + (y1 - y0) * j / n;
      mesh.vertices.emplace_back(x, y);
    }
  }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      mesh.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return mesh;
}

Mesh refine_until(Mesh mesh, double r) {
  while (mesh.max_diameter() > r) mesh = red_refine(mesh);
  return mesh;
}

}  // namespace

Mesh uniform_mesh(const Polygon& domain, int n) {
  if (n < 1) throw std::invalid_argument("uniform_mesh requires n >= 1");
  if (domain.size() < 3 || !(domain.area() > 0)) throw std::invalid_argument("degenerate domain polygon");
  if (domain.is_axis_rectangle()) return rectangle_grid(domain, n);
  return refine_until(polygon_mesh(domain), domain.diameter() / n);
}

Mesh macro_mesh(const Polygon& domain, double r) {
  if (!(r > 0)) throw std::invalid_argument("macro radius must be positive");
  if (domain.size() < 3 || !(domain.area() > 0)) throw std::invalid_argument("degenerate domain polygon");
  if (domain.is_axis_rectangle()) {
    const double n = std::ceil(domain.diameter() / r * (1 - 1e-12));
    return rectangle_grid(domain, std::max(1, static_cast<int>(n)));
  }
  return refine_until(polygon_mesh(domain), r);
}

// ---------------------------------------------------------------- patch plans

namespace {

class OracleCache {
 public:
  ShapeResult get(const HomogeneousForm& pi, double p, double cap) {
    Key key{pi.degree(), p, cap, std::vector<double>(pi.coeffs().begin(), pi.coeffs().end())};
    {
      std::lock_guard lock(mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    ShapeQuery q;
    q.p = p;
    q.cap = cap;
    const ShapeResult r = shape_oracle(pi, q);
    std::lock_guard lock(mutex_);
    if (cache_.size() > 100000) cache_.clear();
    cache_.emplace(std::move(key), r);
    return r;
  }

 private:
  using Key = std::tuple<int, double, double, std::vector<double>>;
  std::mutex mutex_;
  std::map<Key, ShapeResult> cache_;
};

OracleCache& oracle_cache() {
  static OracleCache cache;
  return cache;
}

double cells_diameter(const std::vector<std::vector<Point2>>& cells) {
  Eigen::AlignedBox2d box;
  for (const auto& c : cells)
    for (const auto& v : c) box.extend(v);
  return box.diagonal().norm();
}

Point2 centroid(const std::vector<Point2>& poly) {
  double a = 0.0;
  Point2 c = Point2::Zero();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2 &p = poly[i], &q = poly[(i + 1) % poly.size()];
    const double w = p.x() * q.y() - q.x() * p.y();
    a += w;
    c += w * (p + q);
  }
  return c / (3.0 * a);
}

double shape_proxy(const HomogeneousForm& pi, double p) {
  const int m = pi.degree();
  if (pi.is_zero()) return 0.0;
  if (m == 2 || m == 3) return shape_closed(pi, p);
  if (m <= 5) return invariant_equiv(pi);
  return coeff_norm(pi);
}

// Form used for a macro cell: the barycenter form, or, when its K is below
// 1e-3 ||pi|| (a degenerate barycenter), the median-K form among interior samples.
HomogeneousForm cell_form(const ScalarField& f, const std::vector<Point2>& cell, const Point2& center, int m,
                          double p, double fd_step) {
  const HomogeneousForm at_center = f.taylor(center, m, fd_step);
  if (!at_center.is_zero() && shape_proxy(at_center, p) >= 1e-3 * coeff_norm(at_center)) return at_center;
  std::vector<std::pair<double, HomogeneousForm>> samples{{shape_proxy(at_center, p), at_center}};
  for (std::size_t k = 0; k < cell.size(); ++k) {
    const Point2 mid = 0.5 * (cell[k] + cell[(k + 1) % cell.size()]);
    for (const Point2& z : {cell[k], mid}) {
      const HomogeneousForm pi = f.taylor(center + 0.5 * (z - center), m, fd_step);
      samples.emplace_back(shape_proxy(pi, p), pi);
    }
  }
  std::stable_sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return samples[samples.size() / 2].second;
}

void set_scale(PatchPlan& plan, double s) {
  plan.s = s;
  const double q = plan.q();
  for (auto& patch : plan.patches) {
    const double lambda = s * std::pow(patch.k_eff, -q / 2);
    patch.tile = patch.shape.scaled(lambda).translated(patch.center);
    const Point2 &a = patch.tile.v[0], &b = patch.tile.v[1], &c = patch.tile.v[2];
    patch.a = b - a;
    patch.b = c - a;
    patch.companion = Triangle(b + c - a, c, b);
  }
}

}  // namespace

double PatchPlan::q() const { return 1.0 / (m / 2.0 + (std::isinf(p) ? 0.0 : 1.0 / p)); }

double PatchPlan::predicted_count() const {
  const double qq = q();
  double sum = 0.0;
  for (const auto& patch : patches) sum += polygon_signed_area(patch.cell) * std::pow(patch.k_eff, qq);
  return sum / (s * s);
}

double PatchPlan::c_a() const {
  double c = 0.0;
  for (const auto& patch : patches) c = std::max(c, patch.tile.diameter() / s);
  return c;
}

PatchPlan build_patch_plan(const ScalarField& f, const Mesh& macros, int m, double p, double cap, double s) {
  std::vector<std::vector<Point2>> cells;
  for (std::size_t t = 0; t < macros.num_triangles(); ++t) {
    Triangle tri = macros.triangle(t);
    if (tri.signed_area() < 0) std::swap(tri.v[1], tri.v[2]);
    cells.push_back({tri.v[0], tri.v[1], tri.v[2]});
  }
  PatchPlan plan = build_patch_plan(f, cells, m, p, cap, s);
  plan.macros = macros;
  return plan;
}

PatchPlan build_patch_plan(const ScalarField& f, const std::vector<std::vector<Point2>>& cells, int m, double p,
                           double cap, double s) {
  if (!(s > 0)) throw std::invalid_argument("patch scale s must be positive");
  if (m < 2) throw std::invalid_argument("patch plans require m >= 2");
  if (cells.empty()) throw std::invalid_argument("patch plan without macro cells");
  PatchPlan plan;
  plan.m = m;
  plan.p = p;
  plan.cap = cap;
  plan.patches.resize(cells.size());
  const double fd_step = 1e-3 * cells_diameter(cells);
  parallel_for(plan.patches.size(), [&](std::size_t i) {
    MacroPatch& patch = plan.patches[i];
    patch.cell = cells[i];
    if (patch.cell.size() < 3 || !(polygon_signed_area(patch.cell) > 0)) {
      throw std::invalid_argument("macro cells must be counterclockwise with positive area");
    }
    patch.center = centroid(patch.cell);
    patch.form = cell_form(f, patch.cell, patch.center, m, p, fd_step);
    if (patch.form.is_zero()) {
      patch.shape = unit_equilateral();
      return;
    }
    const ShapeResult r = oracle_cache().get(patch.form, p, cap);
    patch.k = r.value;
    patch.shape = r.triangle;
    if (patch.shape.signed_area() < 0) std::swap(patch.shape.v[1], patch.shape.v[2]);
  });
  double max_norm = 0.0;
  for (const auto& patch : plan.patches) max_norm = std::max(max_norm, coeff_norm(patch.form));
  if (!(max_norm > 0)) throw std::invalid_argument("the m-th derivatives of f vanish on every macro cell");
  for (auto& patch : plan.patches) {
    const double norm = coeff_norm(patch.form);
    patch.k_eff = std::max(patch.k, 1e-4 * (norm > 0 ? norm : max_norm));
  }
  set_scale(plan, s);
  return plan;
}

// ---------------------------------------------------------------- tiling and conformization

namespace {

// Free metric distance between lattice nodes and the cell boundary.
constexpr double kMargin = 0.5;
const double kRowHeight = std::sqrt(3.0) / 2;

// Affine map taking the tile lattice onto the unit equilateral lattice.
LinearMap2 lattice_frame(const MacroPatch& patch) {
  LinearMap2 src, dst;
  src.col(0) = patch.a;
  src.col(1) = patch.b;
  dst << 1.0, 0.5, 0.0, kRowHeight;
  return dst * src.inverse();
}

struct CellMesh {
  std::vector<Point2> lattice;  // real coordinates of the inserted lattice nodes
  std::vector<TriangleIds> tris;  // ring ids are >= 0, lattice node k is -(k + 1)
  std::vector<char> tile;
  std::size_t tiles = 0;
};

// Triangulates one convex cell: boundary ring points plus lattice nodes kept
// kMargin away from the boundary, Delaunay in the lattice metric.
CellMesh mesh_cell(const MacroPatch& patch, const std::vector<int>& ring, const std::vector<Point2>& points) {
  const LinearMap2 j = lattice_frame(patch);
  const Point2 v0 = patch.tile.v[0];
  std::vector<Point2> local;
  for (int id : ring) local.push_back(j * (points[id] - v0));
  const std::size_t nr = local.size();

  // Half-planes n . w >= c of the shrunken cell in metric coordinates.
  std::vector<Point2> cw;
  for (const auto& z : patch.cell) cw.push_back(j * (z - v0));
  const std::size_t ne = cw.size();
  std::vector<Point2> normal(ne);
  std::vector<double> offset(ne);
  double ylo = INFINITY, yhi = -INFINITY;
  for (std::size_t k = 0; k < ne; ++k) {
    const Point2 e = cw[(k + 1) % ne] - cw[k];
    normal[k] = Point2(-e.y(), e.x()).normalized();
    offset[k] = normal[k].dot(cw[k]) + kMargin;
    ylo = std::min(ylo, cw[k].y());
    yhi = std::max(yhi, cw[k].y());
  }
  double cell_area = 0.0;
  for (std::size_t k = 0; k < ne; ++k) cell_area += cw[k].x() * cw[(k + 1) % ne].y() - cw[(k + 1) % ne].x() * cw[k].y();
  if (cell_area / (2 * kRowHeight) > 5e7) throw std::runtime_error("patch tiling too fine for its macro cell");

  std::vector<std::array<long, 2>> index;
  const long r0 = static_cast<long>(std::floor(ylo / kRowHeight)), r1 = static_cast<long>(std::ceil(yhi / kRowHeight));
  for (long r = r0; r <= r1; ++r) {
    const double y = static_cast<double>(r) * kRowHeight;
    const double shift = 0.5 * static_cast<double>(r);
    double xlo = -INFINITY, xhi = INFINITY;
    bool empty = false;
    for (std::size_t k = 0; k < ne && !empty; ++k) {
      const double rest = offset[k] - normal[k].y() * y;
      if (std::abs(normal[k].x()) < 1e-14) {
        empty = rest > 0;
      } else if (normal[k].x() > 0) {
        xlo = std::max(xlo, rest / normal[k].x());
      } else {
        xhi = std::min(xhi, rest / normal[k].x());
      }
    }
    if (empty || !(xlo <= xhi)) continue;
    const long i0 = static_cast<long>(std::ceil(xlo - shift)), i1 = static_cast<long>(std::floor(xhi - shift));
    for (long i = i0; i <= i1; ++i) {
      local.emplace_back(static_cast<double>(i) + shift, y);
      index.push_back({i, r});
    }
  }

  CellMesh out;
  for (const auto& [i, r] : index) out.lattice.push_back(v0 + static_cast<double>(i) * patch.a + static_cast<double>(r) * patch.b);
  // Fan from the node nearest the cell center (a Steiner center when no node
  // fits), then insert the remaining nodes.
  Point2 center = Point2::Zero();
  for (const auto& w : cw) center += w;
  center /= static_cast<double>(ne);
  int hub = -1;
  double best = INFINITY;
  for (std::size_t k = nr; k < local.size(); ++k) {
    const double d = (local[k] - center).squaredNorm();
    if (d < best) {
      best = d;
      hub = static_cast<int>(k);
    }
  }
  if (hub < 0) {
    hub = static_cast<int>(local.size());
    local.push_back(center);
    out.lattice.push_back(v0 + j.inverse() * center);
  }
  for (std::size_t k = 0; k < nr; ++k) {
    const int a = static_cast<int>(k), b = static_cast<int>((k + 1) % nr);
    if (orient2d(local[hub], local[a], local[b]) > 0) out.tris.push_back({hub, a, b});
  }
  std::vector<int> inserted;
  for (std::size_t k = nr; k < local.size(); ++k)
    if (static_cast<int>(k) != hub) inserted.push_back(static_cast<int>(k));
  if (inserted.empty()) {
    delaunay_flip(local, out.tris);
  } else {
    delaunay_insert(local, out.tris, inserted);
  }

  for (auto& t : out.tris) {
    bool lattice = true;
    for (int v : t) lattice = lattice && v >= static_cast<int>(nr);
    bool unit = lattice;
    for (int k = 0; k < 3 && unit; ++k) unit = std::abs((local[t[k]] - local[t[(k + 1) % 3]]).norm() - 1) < 1e-6;
    out.tile.push_back(unit ? 1 : 0);
    out.tiles += unit ? 1 : 0;
    for (int& v : t) v = v < static_cast<int>(nr) ? ring[v] : -(v - static_cast<int>(nr) + 1);
  }
  return out;
}

}  // namespace

AdaptResult assemble_patches(const PatchPlan& plan) {
  const std::size_t nm = plan.patches.size();
  // Corners are shared through exact coordinates.
  std::vector<Point2> points;
  std::map<std::pair<double, double>, int> corner_id;
  std::vector<std::vector<int>> corners(nm);
  for (std::size_t i = 0; i < nm; ++i) {
    for (const auto& v : plan.patches[i].cell) {
      auto [it, fresh] = corner_id.try_emplace({v.x(), v.y()}, static_cast<int>(points.size()));
      if (fresh) points.push_back(v);
      corners[i].push_back(it->second);
    }
  }
  // Each macro edge gets one subdivision, fine enough for every cell using it.
  std::map<std::pair<int, int>, int> segments;
  for (std::size_t i = 0; i < nm; ++i) {
    const LinearMap2 j = lattice_frame(plan.patches[i]);
    const auto& c = corners[i];
    for (std::size_t k = 0; k < c.size(); ++k) {
      const int a = c[k], b = c[(k + 1) % c.size()];
      const double len = (j * (points[b] - points[a])).norm();
      if (!(len < 1e7)) throw std::runtime_error("patch tiling too fine for its macro cell");
      const int n = std::max(1, static_cast<int>(std::ceil(len - 1e-9)));
      int& slot = segments[{std::min(a, b), std::max(a, b)}];
      slot = std::max(slot, n);
    }
  }
  std::map<std::pair<int, int>, std::vector<int>> edge_points;
  for (const auto& [key, n] : segments) {
    const Point2 a = points[key.first], b = points[key.second];
    std::vector<int>& ids = edge_points[key];
    for (int k = 1; k < n; ++k) {
      ids.push_back(static_cast<int>(points.size()));
      points.push_back(a + (static_cast<double>(k) / n) * (b - a));
    }
  }
  std::vector<std::vector<int>> rings(nm);
  for (std::size_t i = 0; i < nm; ++i) {
    const auto& c = corners[i];
    for (std::size_t k = 0; k < c.size(); ++k) {
      const int a = c[k], b = c[(k + 1) % c.size()];
      rings[i].push_back(a);
      const auto& ids = edge_points.at({std::min(a, b), std::max(a, b)});
      if (a < b) {
        rings[i].insert(rings[i].end(), ids.begin(), ids.end());
      } else {
        rings[i].insert(rings[i].end(), ids.rbegin(), ids.rend());
      }
    }
  }

  std::vector<CellMesh> cells(nm);
  parallel_for(nm, [&](std::size_t i) { cells[i] = mesh_cell(plan.patches[i], rings[i], points); });

  AdaptResult out;
  out.plan = plan;
  out.mesh.vertices = points;
  out.macro_tiles.resize(nm);
  for (std::size_t i = 0; i < nm; ++i) {
    const int base = static_cast<int>(out.mesh.vertices.size());
    out.mesh.vertices.insert(out.mesh.vertices.end(), cells[i].lattice.begin(), cells[i].lattice.end());
    for (std::size_t t = 0; t < cells[i].tris.size(); ++t) {
      TriangleIds tri = cells[i].tris[t];
      for (int& v : tri)
        if (v < 0) v = base - v - 1;
      out.mesh.triangles.push_back(tri);
      const bool interior = cells[i].tile[t] != 0;
      out.boundary.push_back(interior ? 0 : 1);
      (interior ? out.interior_count : out.boundary_count)++;
    }
    out.macro_tiles[i] = cells[i].tiles;
  }
  const double n = static_cast<double>(out.mesh.num_triangles());
  out.admissibility = out.mesh.max_diameter() * std::sqrt(n);
  return out;
}

// ---------------------------------------------------------------- adaptation driver

namespace {


// Coarsest division count whose macros see at most a factor 1.5 variation of K^q.
int choose_divisions(const ScalarField& f, const Polygon& domain, int m, double p, int target_n) {
  // About 250 triangles per macro keep the boundary layers a minority; two
  // divisions are always allowed since one cell cannot follow a varying K.
  const int n_max = std::max(2, static_cast<int>(std::floor(std::sqrt(target_n / 500.0))));
  const double diam = domain.diameter();
  const double fd_step = 1e-3 * diam;
  const double q = 1.0 / (m / 2.0 + 1.0 / p);
  for (int n = 1; n < n_max; ++n) {
    const Mesh macros = macro_mesh(domain, diam / n);
    std::map<std::pair<double, double>, std::pair<double, double>> cache;  // z -> (K, ||pi||)
    auto sample = [&](const Point2& z) {
      auto key = std::pair{z.x(), z.y()};
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
      const HomogeneousForm pi = f.taylor(z, m, fd_step);
      const auto v = std::pair{shape_proxy(pi, p), coeff_norm(pi)};
      cache.emplace(key, v);
      return v;
    };
    double max_norm = 0.0;
    std::vector<std::vector<std::pair<double, double>>> values(macros.num_triangles());
    for (std::size_t t = 0; t < macros.num_triangles(); ++t) {
      const Triangle tri = macros.triangle(t);
      const std::array<Point2, 7> pts{tri.v[0],
                                      tri.v[1],
                                      tri.v[2],
                                      0.5 * (tri.v[0] + tri.v[1]),
                                      0.5 * (tri.v[1] + tri.v[2]),
                                      0.5 * (tri.v[2] + tri.v[0]),
                                      tri.barycenter()};
      for (const auto& z : pts) {
        values[t].push_back(sample(z));
        max_norm = std::max(max_norm, values[t].back().second);
      }
    }
    bool ok = true;
    for (const auto& vs : values) {
      double lo = INFINITY, hi = 0.0;
      for (const auto& [k, norm] : vs) {
        const double v = std::pow(std::max(k, 1e-4 * (norm > 0 ? norm : max_norm)), q);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (!(hi <= 1.5 * lo)) {
        ok = false;
        break;
      }
    }
    if (ok) return n;
  }
  return n_max;
}

}  // namespace

AdaptResult adapt_mesh_full(const ScalarField& f, const Polygon& domain, int m, double p, int target_n,
                            const AdaptOptions& options) {
  if (std::isinf(p)) {
    throw std::invalid_argument("mesh generation for p = inf is not supported: its patch tiling is non-conforming");
  }
  if (!(p >= 1)) throw std::invalid_argument("p must be in [1, inf)");
  if (target_n < 20) throw std::invalid_argument("target triangle count must be at least 20");
  if (m < 2) throw std::invalid_argument("adapt_mesh requires m >= 2");
  const double diam = domain.diameter();
  int divisions = options.macro_radius > 0 ? std::max(1, static_cast<int>(std::ceil(diam / options.macro_radius)))
                                           : choose_divisions(f, domain, m, p, target_n);
  for (;;) {
    const double r = diam / divisions;
    PatchPlan plan;
    if (divisions == 1 && options.whole_domain_cell && domain.is_convex()) {
      std::vector<std::vector<Point2>> cells{{domain.vertices().begin(), domain.vertices().end()}};
      plan = build_patch_plan(f, cells, m, p, options.cap, 1.0);
    } else {
      plan = build_patch_plan(f, macro_mesh(domain, r), m, p, options.cap, 1.0);
    }
    const double q = plan.q();
    auto rescale = [&](double factor) {
      set_scale(plan, 1.0);
      set_scale(plan, factor * std::sqrt(plan.predicted_count() / target_n));
    };
    rescale(1.0);
    AdaptResult result = assemble_patches(plan);
    int it = 0;
    double factor = 1.0;
    // Shrink the tiles of macros without an interior tile, then correct the
    // count; repeat while the correction empties a macro again. Macros still
    // empty after that are meshed from their boundary ring alone.
    for (int round = 0; round < 4; ++round) {
      for (int shrink = 0; shrink < 8 && divisions > 1; ++shrink) {
        const auto counts = result.macro_tiles;
        bool changed = false;
        for (std::size_t i = 0; i < counts.size(); ++i) {
          if (counts[i] == 0) {
            plan.patches[i].k_eff *= std::pow(2.0, 2 / q);
            changed = true;
          }
        }
        if (!changed) break;
        rescale(factor);
        result = assemble_patches(plan);
      }
      // Secant steps on log(count) against log(factor); the count scales like
      // factor^-2 while the tiles dominate, more slowly when the boundary does.
      double slope = -2.0, last_log_factor = NAN, last_log_count = NAN;
      for (it = 0; it < options.max_iterations; ++it) {
        const double count = static_cast<double>(result.mesh.num_triangles());
        if (std::abs(count / target_n - 1) <= options.count_tolerance) break;
        const double lf = std::log(factor), lc = std::log(count);
        if (std::isfinite(last_log_factor) && std::abs(lf - last_log_factor) > 1e-9) {
          slope = std::clamp((lc - last_log_count) / (lf - last_log_factor), -3.0, -0.5);
        }
        last_log_factor = lf;
        last_log_count = lc;
        factor *= std::exp((std::log(static_cast<double>(target_n)) - lc) / slope);
        rescale(factor);
        result = assemble_patches(plan);
      }
      if (divisions == 1) break;
      const auto counts = result.macro_tiles;
      if (std::none_of(counts.begin(), counts.end(), [](std::size_t c) { return c == 0; })) break;
    }
    result.iterations = it;
    result.r = r;
    return result;
  }
}

Mesh adapt_mesh(const ScalarField& f, const Polygon& domain, int m, double p, int target_n, double cap) {
  AdaptOptions options;
  options.cap = cap;
  return adapt_mesh_full(f, domain, m, p, target_n, options).mesh;
}

// ---------------------------------------------------------------- diagnostics

EquidistributionReport equidistribution_report(const ScalarField& f, const Mesh& mesh, int m, double p) {
  EquidistributionReport rep;
  if (mesh.num_triangles() == 0) throw std::invalid_argument("equidistribution report of an empty mesh");
  rep.errors = local_errors(f, mesh, m, p);
  std::vector<double> sorted = rep.errors;
  std::sort(sorted.begin(), sorted.end());
  auto percentile = [&](double frac) {
    const double pos = frac * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  rep.p10 = percentile(0.1);
  rep.p90 = percentile(0.9);
  rep.ratio = rep.p10 > 0 ? rep.p90 / rep.p10 : std::numeric_limits<double>::infinity();
  rep.admissibility = mesh.max_diameter() * std::sqrt(static_cast<double>(mesh.num_triangles()));
  return rep;
}

}  // namespace anisoshape
