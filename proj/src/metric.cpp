#include "anisoshape/metric.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

namespace anisoshape {

// ---------------------------------------------------------------- SymMetric2

SymMetric2 SymMetric2::from_matrix(const LinearMap2& m) { return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1)}; }

LinearMap2 SymMetric2::matrix() const {
  LinearMap2 m;
  m << h11, h12, h12, h22;
  return m;
}

std::array<double, 2> SymMetric2::eigenvalues() const {
  const double mean = 0.5 * (h11 + h22);
  const double r = std::hypot(0.5 * (h11 - h22), h12);
  return {mean - r, mean + r};
}

double SymMetric2::ellipse_area() const {
  const double d = det();
  return d > 0 ? std::numbers::pi / std::sqrt(d) : INFINITY;
}

bool SymMetric2::is_psd(double rel_tol) const { return min_eigenvalue() >= -rel_tol * std::abs(trace()); }

SymMetric2 SymMetric2::congruence(const LinearMap2& phi) const {
  return from_matrix(phi.transpose() * matrix() * phi);
}

double SymMetric2::distance(const SymMetric2& o) const {
  return std::sqrt((h11 - o.h11) * (h11 - o.h11) + 2 * (h12 - o.h12) * (h12 - o.h12) + (h22 - o.h22) * (h22 - o.h22));
}

namespace {

constexpr int kDirections = 720;

LinearMap2 diag2(double a, double b) {
  LinearMap2 d = LinearMap2::Zero();
  d(0, 0) = a;
  d(1, 1) = b;
  return d;
}

struct Peak {
  double arg;
  double value;
};

// Maximum of f on (lo, hi): grid of n cell midpoints, golden-section refinement of
// every local maximum of the grid (f is treated as periodic when periodic is set).
template <class F>
Peak grid_golden_max(F&& f, double lo, double hi, int n, bool periodic = true) {
  const double step = (hi - lo) / n;
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = f(lo + (k + 0.5) * step);
  Peak best{lo, -INFINITY};
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int k = 0; k < n; ++k) {
    const bool has_prev = periodic || k > 0, has_next = periodic || k + 1 < n;
    const double prev = has_prev ? v[(k + n - 1) % n] : -INFINITY;
    const double next = has_next ? v[(k + 1) % n] : -INFINITY;
    if (v[k] < prev || v[k] < next) continue;
    if (v[k] > best.value) best = {lo + (k + 0.5) * step, v[k]};
    double a = lo + (k - 0.5) * step, b = lo + (k + 1.5) * step;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 60; ++it) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - r * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + r * (b - a);
        fd = f(d);
      }
    }
    if (fc > best.value) best = {c, fc};
    if (fd > best.value) best = {d, fd};
  }
  return best;
}

// Argmax of |pi(cos t, sin t)| over [0, pi).
double max_direction(const HomogeneousForm& pi, double* value) {
  const Peak p = grid_golden_max([&](double t) { return std::abs(pi(std::cos(t), std::sin(t))); }, 0.0,
                                 std::numbers::pi, kDirections);
  *value = p.value;
  return p.arg;
}

// Least e with first c^2 + e s^2 >= |frame(c, s)|^{2/3} on the unit circle.
double required_extent(const HomogeneousForm& frame, double first) {
  auto need = [&](double psi) {
    const double s = std::sin(psi), c = std::cos(psi);
    return (std::pow(std::abs(frame(c, s)), 2.0 / 3.0) - first * c * c) / (s * s);
  };
  return grid_golden_max(need, 0.0, std::numbers::pi, kDirections).value;
}

bool zero_disc(const HomogeneousForm& pi) { return multiplicity_class(pi) >= 2; }

}  // namespace

// ---------------------------------------------------------------- normalization

CubicNormalization normalize_cubic(const HomogeneousForm& pi) {
  if (pi.degree() != 3) throw std::invalid_argument("normalize_cubic requires a cubic");
  if (pi.is_zero() || zero_disc(pi)) throw std::invalid_argument("cubic with zero discriminant has no normal form");
  const double disc = disc3(pi);
  // Rotate so that no root sits near infinity.
  double gmax = 0.0;
  const double theta = max_direction(pi, &gmax);
  const LinearMap2 rot = rotation(theta);
  const HomogeneousForm p = compose(pi, rot);
  const RootSet rs = roots(p);
  if (rs.roots.size() != 3) throw std::runtime_error("cubic normalization lost a root");
  using C = std::complex<double>;
  CubicNormalization out;
  C r1, r2, r3;
  Eigen::Matrix2cd m;
  const double s3 = std::sqrt(3.0);
  if (disc > 0) {
    std::array<double, 3> r{rs.roots[0].real(), rs.roots[1].real(), rs.roots[2].real()};
    std::sort(r.begin(), r.end());
    r1 = r[0];
    r2 = r[1];
    r3 = r[2];
    out.disc_sign = 1;
    out.normal_form = HomogeneousForm({0.0, -3.0, 0.0, 1.0});
  } else {
    std::vector<C> r(rs.roots.begin(), rs.roots.end());
    std::sort(r.begin(), r.end(), [](const C& a, const C& b) { return std::abs(a.imag()) < std::abs(b.imag()); });
    r1 = C(r[0].real(), 0.0);
    r2 = r[1].imag() > 0 ? r[1] : r[2];
    r2 = C(r2.real(), std::abs(r2.imag()));
    r3 = std::conj(r2);
    out.disc_sign = -1;
    out.normal_form = HomogeneousForm({0.0, 3.0, 0.0, 1.0});
  }
  m(0, 0) = r1 * (r2 + r3) - 2.0 * r2 * r3;
  m(1, 0) = 2.0 * r1 - (r2 + r3);
  m(0, 1) = (r2 - r3) * r1 * s3;
  m(1, 1) = (r2 - r3) * s3;
  if (disc < 0) m.col(1) *= C(0.0, 1.0);
  LinearMap2 mr = m.real();
  // Scale so that the x^3 coefficients agree (least squares over all four).
  const HomogeneousForm q = compose(p, mr);
  double num = 0.0, den = 0.0;
  for (int i = 0; i <= 3; ++i) {
    num += q[i] * out.normal_form[i];
    den += q[i] * q[i];
  }
  if (!(den > 0)) throw std::runtime_error("cubic normalization failed");
  mr *= std::cbrt(num / den);
  out.phi = rot * mr;
  const double resid = coeff_norm(compose(pi, out.phi) - out.normal_form);
  if (!(resid < 1e-8)) throw std::runtime_error("cubic normalization residual too large");
  return out;
}

// ---------------------------------------------------------------- unconstrained metrics

SymMetric2 hmatrix2(const HomogeneousForm& pi) { return hmatrix2_constrained(pi, 0.0); }

SymMetric2 hmatrix2_constrained(const HomogeneousForm& pi, double alpha) {
  if (pi.degree() != 2) throw std::invalid_argument("hmatrix2 requires a quadratic form");
  if (alpha < 0) throw std::invalid_argument("alpha must be nonnegative");
  LinearMap2 a;
  a << pi[2], 0.5 * pi[1], 0.5 * pi[1], pi[0];
  Eigen::SelfAdjointEigenSolver<LinearMap2> es(a);
  const auto& l = es.eigenvalues();
  const LinearMap2& v = es.eigenvectors();
  const LinearMap2 d = diag2(std::max(std::abs(l[0]), alpha), std::max(std::abs(l[1]), alpha));
  return SymMetric2::from_matrix(v * d * v.transpose());
}

SymMetric2 hmatrix3(const HomogeneousForm& pi) {
  const CubicNormalization n = normalize_cubic(pi);
  const LinearMap2 inv = n.phi.inverse();
  const double s = n.disc_sign > 0 ? 1.0 : std::cbrt(2.0);
  return SymMetric2::from_matrix(s * inv.transpose() * inv);
}

double levelset_margin(const SymMetric2& h, const HomogeneousForm& pi) {
  const int m = pi.degree();
  double margin = INFINITY;
  for (int k = 0; k < kDirections; ++k) {
    const double t = std::numbers::pi * k / kDirections;
    const Point2 u(std::cos(t), std::sin(t));
    const double g = std::pow(std::abs(pi(u)), 2.0 / m);
    if (g <= 0) continue;
    margin = std::min(margin, h.quad(u) / g);
  }
  return margin;
}

// ---------------------------------------------------------------- thresholds

RegimeThresholds regime_thresholds(const HomogeneousForm& pi) {
  if (pi.degree() != 3) throw std::invalid_argument("regime thresholds are defined for cubics");
  if (pi.is_zero()) throw std::invalid_argument("regime thresholds of the zero form");
  RegimeThresholds th;
  double gmax = 0.0;
  const double theta = max_direction(pi, &gmax);
  th.mu = std::pow(gmax, 2.0 / 3.0);
  th.z_pi = Point2(std::cos(theta), std::sin(theta)) * std::pow(gmax, -1.0 / 3.0);
  th.u_pi = rotation(-theta);
  const int mult = multiplicity_class(pi);
  if (mult >= 3) return th;  // alpha_pi = beta_pi = 0

  // alpha_pi: least alpha with U^T diag(mu, alpha) U inside the level set.
  const double best = required_extent(compose(pi, th.u_pi.transpose()), th.mu);
  th.alpha_star = std::clamp(best, 0.0, th.mu);
  if (mult == 1) th.beta = std::min(hmatrix3(pi).min_eigenvalue(), th.alpha_star);
  return th;
}

// ---------------------------------------------------------------- constrained cubic metric

namespace {

// Quadri-tangent ellipses of the normal form: diag(k(lambda), lambda) for the
// two cubic normal forms and diag(lambda, k(lambda)) for x^2 y.
struct Family {
  LinearMap2 phi;  // pi o phi = normal form
  std::vector<double> rotations;
  double s, t;     // k(lambda) = (s + t lambda^3) / (3 lambda^2)
  double lambda_max;
  bool k_first;
};

Family cubic_family(const HomogeneousForm& pi) {
  Family fam;
  if (multiplicity_class(pi) == 1) {
    const CubicNormalization n = normalize_cubic(pi);
    fam.phi = n.phi;
    fam.s = 4.0;
    if (n.disc_sign > 0) {
      fam.t = -1.0;
      fam.lambda_max = 1.0;
      fam.rotations = {0.0, std::numbers::pi / 3, 2 * std::numbers::pi / 3};
    } else {
      fam.t = 1.0;
      fam.lambda_max = 2.0;
      fam.rotations = {0.0};
    }
    fam.k_first = true;
    return fam;
  }
  // pi = c l1^2 l2: phi = L^{-1} diag(1, 1/c) maps x^2 y to pi.
  const auto clusters = root_clusters(pi);
  RootCluster dbl, sgl;
  for (const auto& c : clusters) (c.size == 2 ? dbl : sgl) = c;
  auto linear = [](const RootCluster& c) {
    // Coefficients (p, q) of p x + q y vanishing on the root direction.
    return c.at_infinity ? Point2(0.0, 1.0) : Point2(1.0, -c.center.real());
  };
  const Point2 l1 = linear(dbl), l2 = linear(sgl);
  LinearMap2 l;
  l << l1.x(), l1.y(), l2.x(), l2.y();
  double best = 0.0, cval = 0.0;
  for (int k = 0; k < 12; ++k) {
    const double t = std::numbers::pi * k / 12;
    const Point2 u(std::cos(t), std::sin(t));
    const double lin = std::pow(l1.dot(u), 2) * l2.dot(u);
    if (std::abs(lin) > best) {
      best = std::abs(lin);
      cval = pi(u) / lin;
    }
  }
  fam.phi = l.inverse() * diag2(1.0, 1.0 / cval);
  fam.s = 4.0 / 9.0;
  fam.t = 0.0;
  fam.lambda_max = INFINITY;
  fam.rotations = {0.0};
  fam.k_first = false;
  return fam;
}

struct Candidate {
  SymMetric2 h;
  double det = INFINITY;
  bool found = false;
};

void consider(Candidate& best, const SymMetric2& h, double alpha) {
  if (h.min_eigenvalue() < alpha * (1 - 1e-8)) return;
  const double d = h.det();
  if (d < best.det) {
    best.det = d;
    best.h = h;
    best.found = true;
  }
}

SymMetric2 family_member(const Family& fam, const LinearMap2& vinv_phi, double lambda) {
  const double k = (fam.s + fam.t * lambda * lambda * lambda) / (3 * lambda * lambda);
  const LinearMap2 d = fam.k_first ? diag2(k, lambda) : diag2(lambda, k);
  return SymMetric2::from_matrix(vinv_phi.transpose() * d * vinv_phi);
}

Candidate solve_family(const Family& fam, double alpha) {
  Candidate best;
  const LinearMap2 phi_inv = fam.phi.inverse();
  for (double ang : fam.rotations) {
    const LinearMap2 v = rotation(ang);
    const LinearMap2 w = v * phi_inv;  // H = w^T H_lambda w
    {
      const LinearMap2 g = v * fam.phi.transpose() * fam.phi * v.transpose();
      // det(H_lambda - alpha G) = (lambda - a)(k - b) - c
      const double glam = fam.k_first ? g(1, 1) : g(0, 0);
      const double gk = fam.k_first ? g(0, 0) : g(1, 1);
      const double a = alpha * glam, b = alpha * gk, c = alpha * alpha * g(0, 1) * g(0, 1);
      const double s = fam.s, t = fam.t;
      // t l^4 - (3b + a t) l^3 + 3(ab - c) l^2 + s l - a s = 0
      std::vector<double> coeffs{-a * s, s, 3 * (a * b - c), -(3 * b + a * t), t};
      const HomogeneousForm poly(coeffs);
      if (poly.is_zero()) continue;
      auto eval = [&](double l) { return (((t * l - (3 * b + a * t)) * l + 3 * (a * b - c)) * l + s) * l - a * s; };
      auto deriv = [&](double l) { return ((4 * t * l - 3 * (3 * b + a * t)) * l + 6 * (a * b - c)) * l + s; };
      for (const auto& r : roots(poly).roots) {
        if (std::abs(r.imag()) > 1e-6 * (1 + std::abs(r))) continue;
        double l = r.real();
        for (int it = 0; it < 4; ++it) {
          const double dl = deriv(l);
          if (dl == 0) break;
          l -= eval(l) / dl;
        }
        if (!(l > 0) || l > fam.lambda_max * (1 + 1e-12)) continue;
        consider(best, family_member(fam, w, std::min(l, fam.lambda_max)), alpha);
      }
    }
  }
  return best;
}

// Ellipses U^T diag(alpha, e) U with e minimal for the rotation U, minimized over U.
Candidate solve_direct(const HomogeneousForm& pi, double alpha) {
  auto extent = [&](double theta) {
    return std::max(alpha, required_extent(compose(pi, rotation(-theta).transpose()), alpha));
  };
  const Peak p = grid_golden_max([&](double t) { return -extent(t); }, 0.0, std::numbers::pi, 360);
  const LinearMap2 u = rotation(-p.arg);
  Candidate c;
  c.h = SymMetric2::from_matrix(u.transpose() * diag2(alpha, -p.value) * u);
  c.det = c.h.det();
  c.found = std::isfinite(c.det);
  return c;
}

}  // namespace

ConstrainedMetric hmatrix3_constrained_full(const HomogeneousForm& pi, double alpha) {
  if (pi.degree() != 3) throw std::invalid_argument("hmatrix3_constrained requires a cubic");
  if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
  ConstrainedMetric out;
  if (pi.is_zero()) {
    out.h = SymMetric2::identity(alpha);
    out.regime = 1;
    return out;
  }
  out.thresholds = regime_thresholds(pi);
  const RegimeThresholds& th = out.thresholds;
  if (alpha >= th.mu) {
    out.regime = 1;
    out.h = SymMetric2::identity(alpha);
  } else if (alpha >= th.alpha_star) {
    out.regime = 2;
    out.h = SymMetric2::from_matrix(th.u_pi.transpose() * diag2(th.mu, alpha) * th.u_pi);
  } else if (alpha > th.beta) {
    out.regime = 3;
    Candidate c = solve_family(cubic_family(pi), alpha);
    const Candidate d = solve_direct(pi, alpha);
    if (!c.found || d.det < c.det * (1 - 1e-9)) {
      if (!d.found) throw std::runtime_error("no admissible constrained ellipse");
      c = d;
      out.fallback = true;
    }
    out.h = c.h;
  } else {
    out.regime = 4;
    out.h = hmatrix3(pi);
  }
  return out;
}

SymMetric2 hmatrix3_constrained(const HomogeneousForm& pi, double alpha) {
  return hmatrix3_constrained_full(pi, alpha).h;
}

// ---------------------------------------------------------------- metric field

std::vector<Point2> domain_grid(const Polygon& domain, int n) {
  if (n < 1) throw std::invalid_argument("grid size must be positive");
  const auto b = domain.bbox();
  std::vector<Point2> pts;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Point2 z(b[0] + (b[2] - b[0]) * (i + 0.5) / n, b[1] + (b[3] - b[1]) * (j + 0.5) / n);
      if (domain.contains(z)) pts.push_back(z);
    }
  return pts;
}

MetricField::MetricField(ScalarField f, Polygon domain, int m, double p, double nu, double alpha_floor)
    : f_(std::move(f)), domain_(std::move(domain)), m_(m), p_(p), nu_(nu), floor_(alpha_floor) {
  if (m != 2 && m != 3) throw std::invalid_argument("metric fields are available for m = 2, 3");
  if (!(nu > 0)) throw std::invalid_argument("nu must be positive");
  if (!(p >= 1)) throw std::invalid_argument("p must be in [1, inf]");
  if (domain_.size() < 3) throw std::invalid_argument("empty domain");
  fd_step_ = 1e-3 * domain_.diameter();
  if (floor_ < 0) {
    double mx = 0.0;
    for (const auto& z : domain_grid(domain_, 32)) {
      mx = std::max(mx, std::pow(coeff_norm(f_.taylor(z, m_, fd_step_)), 2.0 / m_));
    }
    floor_ = mx > 0 ? 1e-4 * mx : 1e-4;
  }
}

MetricSample MetricField::sample(const Point2& z) const {
  MetricSample s;
  s.form = f_.taylor(z, m_, fd_step_);
  if (m_ == 2) {
    s.h = hmatrix2_constrained(s.form, floor_);
  } else if (floor_ > 0) {
    s.h = hmatrix3_constrained(s.form, floor_);
  } else if (!s.form.is_zero() && multiplicity_class(s.form) == 1) {
    s.h = hmatrix3(s.form);
  } else if (!s.form.is_zero()) {
    const RegimeThresholds th = regime_thresholds(s.form);
    s.h = SymMetric2::from_matrix(th.u_pi.transpose() * diag2(th.mu, 0.0) * th.u_pi);
  } else {
    s.h = SymMetric2(0, 0, 0);
  }
  const double det = s.h.det();
  if (!(det > 0)) {
    s.degenerate = true;
    return s;
  }
  const double area = s.h.ellipse_area();
  const double mp2 = m_ * p_ + 2.0;
  s.alpha_z = std::isinf(p_) ? std::pow(nu_, 1.0 / m_) : std::pow(nu_, p_ / mp2) * std::pow(area, -1.0 / mp2);
  s.h = s.h * (1.0 / (s.alpha_z * s.alpha_z));
  return s;
}

}  // namespace anisoshape
