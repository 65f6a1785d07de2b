#include "anisoshape/lagrange.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include <Eigen/LU>

#include "anisoshape/parallel.hpp"
#include "anisoshape/quadrature.hpp"

namespace anisoshape {

// ---------------------------------------------------------------- Polynomial2

Polynomial2::Polynomial2(int degree) : Polynomial2(degree, Point2::Zero(), LinearMap2::Identity()) {}

Polynomial2::Polynomial2(int degree, Point2 origin, LinearMap2 frame)
    : degree_(degree),
      c_(static_cast<std::size_t>((degree + 1) * (degree + 1)), 0.0),
      origin_(std::move(origin)),
      frame_(std::move(frame)) {
  if (degree < 0) throw std::invalid_argument("polynomial degree must be nonnegative");
}

double Polynomial2::operator()(const Point2& z) const {
  const Point2 st = frame_ * (z - origin_);
  double acc = 0.0;
  for (int a = degree_; a >= 0; --a) {
    double row = 0.0;
    for (int b = degree_ - a; b >= 0; --b) row = row * st.y() + coeff(a, b);
    acc = acc * st.x() + row;
  }
  return acc;
}

namespace {

// Dense (n+1)x(n+1) tables of x^a y^b coefficients.
using Table = std::vector<double>;

Table table_mul(const Table& p, const Table& q, int n) {
  Table r(p.size(), 0.0);
  for (int a = 0; a <= n; ++a)
    for (int b = 0; a + b <= n; ++b) {
      const double pv = p[a * (n + 1) + b];
      if (pv == 0.0) continue;
      for (int c = 0; a + c <= n; ++c)
        for (int d = 0; a + b + c + d <= n; ++d) r[(a + c) * (n + 1) + b + d] += pv * q[c * (n + 1) + d];
    }
  return r;
}

}  // namespace

Polynomial2 Polynomial2::expanded() const {
  const int n = degree_;
  const std::size_t sz = static_cast<std::size_t>((n + 1) * (n + 1));
  Table s(sz, 0.0), t(sz, 0.0), one(sz, 0.0);
  one[0] = 1.0;
  const Point2 shift = frame_ * origin_;
  if (n >= 1) {
    s[1 * (n + 1) + 0] = frame_(0, 0);
    s[0 * (n + 1) + 1] = frame_(0, 1);
    t[1 * (n + 1) + 0] = frame_(1, 0);
    t[0 * (n + 1) + 1] = frame_(1, 1);
  }
  s[0] = -shift.x();
  t[0] = -shift.y();
  std::vector<Table> sp{one}, tp{one};
  for (int k = 1; k <= n; ++k) {
    sp.push_back(table_mul(sp.back(), s, n));
    tp.push_back(table_mul(tp.back(), t, n));
  }
  Polynomial2 out(n);
  for (int a = 0; a <= n; ++a)
    for (int b = 0; a + b <= n; ++b) {
      const double c = coeff(a, b);
      if (c == 0.0) continue;
      const Table term = table_mul(sp[a], tp[b], n);
      for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) out.coeff(i, j) += c * term[i * (n + 1) + j];
    }
  return out;
}

// ---------------------------------------------------------------- fields

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::vector<double> finite_difference_partials(const std::function<double(double, double)>& f, const Point2& z,
                                               int m, double h) {
  if (!(h > 0)) throw std::invalid_argument("finite-difference step must be positive");
  std::vector<double> out(static_cast<std::size_t>(m) + 1, 0.0);
  for (int k = 0; k <= m; ++k) {
    const int l = m - k;
    // delta^k_x delta^l_y f with central offsets (k/2 - i) h.
    double acc = 0.0;
    for (int i = 0; i <= k; ++i) {
      const double wi = ((i % 2) ? -1.0 : 1.0) * binom(k, i);
      for (int j = 0; j <= l; ++j) {
        const double wj = ((j % 2) ? -1.0 : 1.0) * binom(l, j);
        acc += wi * wj * f(z.x() + (0.5 * k - i) * h, z.y() + (0.5 * l - j) * h);
      }
    }
    out[k] = acc / std::pow(h, m);
  }
  return out;
}

HomogeneousForm ScalarField::taylor(const Point2& z, int m, double fd_step) const {
  if (m < 1) throw std::invalid_argument("derivative order must be positive");
  std::vector<double> d;
  if (partials) {
    d = partials(z.x(), z.y(), m);
    if (static_cast<int>(d.size()) != m + 1) throw std::runtime_error("partials callback returned wrong size");
  } else {
    d = finite_difference_partials(value, z, m, fd_step);
  }
  return taylor_form(d);
}

ScalarField form_field(const HomogeneousForm& pi) {
  ScalarField f;
  f.value = [pi](double x, double y) { return pi(x, y); };
  f.partials = [pi](double, double, int m) {
    if (m != pi.degree()) throw std::invalid_argument("form_field provides only order-m partials");
    std::vector<double> d(static_cast<std::size_t>(m) + 1);
    double fk = 1.0;
    for (int k = 0; k <= m; ++k) {
      double fl = 1.0;
      for (int i = 2; i <= m - k; ++i) fl *= i;
      d[k] = pi[k] * fk * fl;
      fk *= (k + 1);
    }
    return d;
  };
  return f;
}

// ---------------------------------------------------------------- reference data

namespace {

struct Reference {
  int m = 0;
  std::vector<Point2> nodes;                // reference coordinates
  std::vector<std::pair<int, int>> monos;   // (a, b) for s^a t^b
  Eigen::MatrixXd vinv;                     // coefficient = vinv * nodal values

  Eigen::RowVectorXd monomials(const Point2& x) const {
    Eigen::RowVectorXd r(monos.size());
    for (std::size_t k = 0; k < monos.size(); ++k)
      r[k] = std::pow(x.x(), monos[k].first) * std::pow(x.y(), monos[k].second);
    return r;
  }
  Eigen::RowVectorXd basis(const Point2& x) const { return monomials(x) * vinv; }
};

std::vector<std::array<int, 3>> barycentric_indices(int m) {
  std::vector<std::array<int, 3>> out;
  const int n = m - 1;
  for (int i = n; i >= 0; --i)
    for (int j = n - i; j >= 0; --j) out.push_back({i, j, n - i - j});
  return out;
}

const Reference& reference(int m) {
  if (m < 2) throw std::invalid_argument("Lagrange degree m must be >= 2");
  static std::map<int, std::unique_ptr<Reference>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return *it->second;
  auto r = std::make_unique<Reference>();
  r->m = m;
  const int n = m - 1;
  for (const auto& idx : barycentric_indices(m)) {
    r->nodes.emplace_back(static_cast<double>(idx[1]) / n, static_cast<double>(idx[2]) / n);
  }
  for (int d = 0; d <= n; ++d)
    for (int a = d; a >= 0; --a) r->monos.emplace_back(a, d - a);
  const int nn = static_cast<int>(r->nodes.size());
  Eigen::MatrixXd v(nn, nn);
  for (int i = 0; i < nn; ++i) v.row(i) = r->monomials(r->nodes[i]);
  r->vinv = v.fullPivLu().inverse();
  return *cache.emplace(m, std::move(r)).first->second;
}

bool even_integer(double p) { return p >= 2 && p <= 32 && p == std::floor(p) && static_cast<int>(p) % 2 == 0; }

// Largest |err| on the reference triangle: lattice scan, then a shrinking
// pattern search around the best few lattice points.
template <class Err>
double reference_sup(const Err& err, const std::vector<double>* lattice_values = nullptr) {
  const auto& pts = lattice_points(64);
  std::vector<std::pair<double, int>> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    vals[i] = {lattice_values ? (*lattice_values)[i] : std::abs(err(pts[i])), static_cast<int>(i)};
  const std::size_t top = std::min<std::size_t>(3, vals.size());
  std::partial_sort(vals.begin(), vals.begin() + top, vals.end(), [](auto& a, auto& b) { return a.first > b.first; });
  double best = vals[0].first;
  auto clamp_ref = [](Point2 x) {
    x.x() = std::max(0.0, x.x());
    x.y() = std::max(0.0, x.y());
    const double s = x.x() + x.y();
    if (s > 1.0) x /= s;
    return x;
  };
  for (std::size_t c = 0; c < top; ++c) {
    Point2 x = pts[vals[c].second];
    double fx = vals[c].first;
    double h = 1.0 / 64;
    for (int round = 0; round < 12; ++round) {
      bool moved = false;
      for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy) {
          if (!dx && !dy) continue;
          const Point2 y = clamp_ref(x + h * Point2(dx, dy));
          const double fy = std::abs(err(y));
          if (fy > fx) {
            fx = fy;
            x = y;
            moved = true;
          }
        }
      if (!moved) h *= 0.5;
    }
    best = std::max(best, fx);
  }
  return best;
}

const QuadRule& rule_for(int m, double p) {
  if (even_integer(p)) return triangle_rule(static_cast<int>(p) * m + 2);
  return lattice_centroid_rule(64);
}

}  // namespace

std::vector<Point2> lagrange_nodes(const Triangle& t, int m) {
  t.require_nondegenerate();
  const Reference& r = reference(m);
  const LinearMap2 j = t.edge_matrix();
  std::vector<Point2> out;
  out.reserve(r.nodes.size());
  for (const auto& x : r.nodes) out.push_back(t.v[0] + j * x);
  return out;
}

Polynomial2 interpolate(const ScalarField& v, const Triangle& t, int m) {
  t.require_nondegenerate();
  const Reference& r = reference(m);
  const LinearMap2 j = t.edge_matrix();
  Eigen::VectorXd g(r.nodes.size());
  for (std::size_t i = 0; i < r.nodes.size(); ++i) g[i] = v(t.v[0] + j * r.nodes[i]);
  const Eigen::VectorXd c = r.vinv * g;
  Polynomial2 q(m - 1, t.v[0], j.inverse());
  for (std::size_t k = 0; k < r.monos.size(); ++k) q.coeff(r.monos[k].first, r.monos[k].second) = c[k];
  return q;
}

double local_error(const ScalarField& v, const Triangle& t, int m, double p) {
  if (!(p >= 1)) throw std::invalid_argument("p must be in [1, inf]");
  t.require_nondegenerate();
  const Reference& r = reference(m);
  const LinearMap2 j = t.edge_matrix();
  Eigen::VectorXd g(r.nodes.size());
  for (std::size_t i = 0; i < r.nodes.size(); ++i) g[i] = v(t.v[0] + j * r.nodes[i]);
  const Eigen::VectorXd c = r.vinv * g;
  auto err = [&](const Point2& x) { return v(t.v[0] + j * x) - r.monomials(x).dot(c); };
  if (std::isinf(p)) return reference_sup(err);
  const QuadRule& rule = rule_for(m, p);
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) acc += rule.weights[q] * std::pow(std::abs(err(rule.points[q])), p);
  return std::pow(std::abs(j.determinant()) * acc, 1.0 / p);
}

double local_error(const HomogeneousForm& pi, const Triangle& t, double p) {
  return FormErrorKernel(pi.degree(), p)(pi, t);
}

// ---------------------------------------------------------------- FormErrorKernel

FormErrorKernel::FormErrorKernel(int m, double p) : m_(m), p_(p) {
  if (!(p >= 1)) throw std::invalid_argument("p must be in [1, inf]");
  const Reference& r = reference(m);
  if (std::isinf(p)) {
    points_ = lattice_points(64);
  } else {
    const QuadRule& rule = rule_for(m, p);
    points_ = rule.points;
    weights_ = rule.weights;
  }
  basis_err_.resize(points_.size() * (m + 1));
  // Nodal values of each basis monomial s^i t^(m-i).
  Eigen::MatrixXd nodal(r.nodes.size(), m + 1);
  for (std::size_t n = 0; n < r.nodes.size(); ++n)
    for (int i = 0; i <= m; ++i) nodal(n, i) = std::pow(r.nodes[n].x(), i) * std::pow(r.nodes[n].y(), m - i);
  const Eigen::MatrixXd coef = r.vinv * nodal;
  for (std::size_t q = 0; q < points_.size(); ++q) {
    const Point2& x = points_[q];
    const Eigen::RowVectorXd interp = r.monomials(x) * coef;
    for (int i = 0; i <= m; ++i) {
      basis_err_[q * (m + 1) + i] = std::pow(x.x(), i) * std::pow(x.y(), m - i) - interp[i];
    }
  }
}

double FormErrorKernel::reference_error(const HomogeneousForm& pi_ref) const {
  if (pi_ref.degree() != m_) throw std::invalid_argument("form degree does not match kernel");
  const std::size_t w = static_cast<std::size_t>(m_) + 1;
  const auto b = pi_ref.coeffs();
  if (std::isinf(p_)) {
    std::vector<double> lattice(points_.size());
    for (std::size_t q = 0; q < points_.size(); ++q) {
      double e = 0.0;
      for (std::size_t i = 0; i < w; ++i) e += b[i] * basis_err_[q * w + i];
      lattice[q] = std::abs(e);
    }
    const Reference& r = reference(m_);
    Eigen::VectorXd g(r.nodes.size());
    for (std::size_t n = 0; n < r.nodes.size(); ++n) g[n] = pi_ref(r.nodes[n]);
    const Eigen::VectorXd c = r.vinv * g;
    return reference_sup([&](const Point2& x) { return pi_ref(x) - r.monomials(x).dot(c); }, &lattice);
  }
  double acc = 0.0;
  const bool square = p_ == 2.0;
  for (std::size_t q = 0; q < points_.size(); ++q) {
    double e = 0.0;
    for (std::size_t i = 0; i < w; ++i) e += b[i] * basis_err_[q * w + i];
    acc += weights_[q] * (square ? e * e : std::pow(std::abs(e), p_));
  }
  return square ? std::sqrt(acc) : std::pow(acc, 1.0 / p_);
}

double FormErrorKernel::operator()(const HomogeneousForm& pi, const Triangle& t) const {
  const LinearMap2 j = t.edge_matrix();
  const double det = std::abs(j.determinant());
  if (!(det > 0)) throw std::invalid_argument("degenerate triangle");
  const double ref = reference_error(compose(pi, j));
  return std::isinf(p_) ? ref : std::pow(det, 1.0 / p_) * ref;
}

// ---------------------------------------------------------------- mesh errors

std::vector<double> local_errors(const ScalarField& v, const Mesh& mesh, int m, double p) {
  std::vector<double> out(mesh.num_triangles());
  parallel_for(out.size(), [&](std::size_t t) { out[t] = local_error(v, mesh.triangle(t), m, p); });
  return out;
}

double global_error(const ScalarField& v, const Mesh& mesh, int m, double p) {
  if (mesh.triangles.empty()) throw std::invalid_argument("empty mesh");
  const auto e = local_errors(v, mesh, m, p);
  if (std::isinf(p)) return *std::max_element(e.begin(), e.end());
  double acc = 0.0;
  for (double x : e) acc += std::pow(x, p);
  return std::pow(acc, 1.0 / p);
}

}  // namespace anisoshape
