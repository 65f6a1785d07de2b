#include "anisoshape/forms.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace anisoshape {

HomogeneousForm::HomogeneousForm(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < 2) throw std::invalid_argument("homogeneous form needs degree >= 1");
  for (double a : coeffs_) {
    if (!std::isfinite(a)) throw std::invalid_argument("non-finite form coefficient");
  }
}

HomogeneousForm HomogeneousForm::zero(int degree) {
  if (degree < 1) throw std::invalid_argument("homogeneous form needs degree >= 1");
  return HomogeneousForm(std::vector<double>(static_cast<std::size_t>(degree) + 1, 0.0));
}

double HomogeneousForm::operator()(double x, double y) const {
  // Horner in x with y-powers accumulated from the top coefficient down.
  double acc = 0.0;
  double ypow = 1.0;
  const int m = degree();
  // sum_i a_i x^i y^(m-i) = y^m * sum_i a_i (x/y)^i is unstable at y = 0, so
  // accumulate acc = (((a_m) x + a_{m-1} y) x + a_{m-2} y^2) ...
  for (int i = m; i >= 0; --i) {
    acc = acc * x + coeffs_[static_cast<std::size_t>(i)] * ypow;
    ypow *= y;
  }
  return acc;
}

bool HomogeneousForm::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double a) { return a == 0.0; });
}

HomogeneousForm HomogeneousForm::operator*(double s) const {
  std::vector<double> c(coeffs_);
  for (double& a : c) a *= s;
  return HomogeneousForm(std::move(c));
}

HomogeneousForm HomogeneousForm::operator+(const HomogeneousForm& o) const {
  if (o.degree() != degree()) throw std::invalid_argument("degree mismatch");
  std::vector<double> c(coeffs_);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.coeffs_[i];
  return HomogeneousForm(std::move(c));
}

HomogeneousForm HomogeneousForm::operator-(const HomogeneousForm& o) const { return *this + o * -1.0; }

HomogeneousForm HomogeneousForm::parse(std::string_view token) {
  const auto colon = token.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("form token must be \"m:a_0,...,a_m\"");
  int m = 0;
  {
    const auto head = token.substr(0, colon);
    auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), m);
    if (ec != std::errc() || ptr != head.data() + head.size() || m < 1) {
      throw std::invalid_argument("bad form degree in \"" + std::string(token) + "\"");
    }
  }
  std::vector<double> c;
  std::string_view rest = token.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string item(rest.substr(0, comma));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad form coefficient \"" + item + "\"");
    }
    if (used != item.size()) throw std::invalid_argument("bad form coefficient \"" + item + "\"");
    c.push_back(v);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (static_cast<int>(c.size()) != m + 1) {
    throw std::invalid_argument("form of degree " + std::to_string(m) + " needs " + std::to_string(m + 1) +
                                " coefficients");
  }
  return HomogeneousForm(std::move(c));
}

std::string HomogeneousForm::to_string() const {
  std::string s = std::to_string(degree()) + ":";
  char buf[40];
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", coeffs_[i]);
    if (i) s += ',';
    s += buf;
  }
  return s;
}

namespace {

// Homogeneous polynomial of degree n stored as c[j] = coefficient of x^j y^(n-j).
std::vector<double> multiply(const std::vector<double>& p, const std::vector<double>& q) {
  std::vector<double> r(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

HomogeneousForm compose(const HomogeneousForm& pi, const LinearMap2& phi) {
  const int m = pi.degree();
  const std::vector<double> X{phi(0, 1), phi(0, 0)};
  const std::vector<double> Y{phi(1, 1), phi(1, 0)};
  std::vector<std::vector<double>> xp(static_cast<std::size_t>(m) + 1), yp(static_cast<std::size_t>(m) + 1);
  xp[0] = {1.0};
  yp[0] = {1.0};
  for (int k = 1; k <= m; ++k) {
    xp[k] = multiply(xp[k - 1], X);
    yp[k] = multiply(yp[k - 1], Y);
  }
  std::vector<double> out(static_cast<std::size_t>(m) + 1, 0.0);
  for (int i = 0; i <= m; ++i) {
    const double a = pi[i];
    if (a == 0.0) continue;
    const auto term = multiply(xp[i], yp[m - i]);
    for (std::size_t j = 0; j < term.size(); ++j) out[j] += a * term[j];
  }
  return HomogeneousForm(std::move(out));
}

double coeff_norm(const HomogeneousForm& pi) {
  double n = 0.0;
  for (double a : pi.coeffs()) n = std::max(n, std::abs(a));
  return n;
}

double det2(const HomogeneousForm& pi) {
  if (pi.degree() != 2) throw std::invalid_argument("det2 requires a quadratic form");
  const double a = pi[2];
  const double b = 0.5 * pi[1];
  const double c = pi[0];
  return a * c - b * b;
}

double disc3(const HomogeneousForm& pi) {
  if (pi.degree() != 3) throw std::invalid_argument("disc3 requires a cubic form");
  const double a = pi[3];
  const double b = pi[2];
  const double c = pi[1];
  const double d = pi[0];
  return b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d + 18 * a * b * c * d - 27 * a * a * d * d;
}

HomogeneousForm RootSet::reconstruct() const {
  using C = std::complex<double>;
  // poly[j] = coefficient of x^j y^(n-j)
  std::vector<C> poly{C(1.0)};
  for (const auto& r : roots) {
    std::vector<C> next(poly.size() + 1, C(0.0));
    for (std::size_t j = 0; j < poly.size(); ++j) {
      next[j + 1] += poly[j];   // x * ...
      next[j] += -r * poly[j];  // -r y * ...
    }
    poly.swap(next);
  }
  std::vector<double> out(poly.size() + static_cast<std::size_t>(divisible_by_y), 0.0);
  // Multiplying by y^k leaves x-powers unchanged and raises the total degree.
  for (std::size_t j = 0; j < poly.size(); ++j) out[j] = leading * poly[j].real();
  return HomogeneousForm(std::move(out));
}

RootSet roots(const HomogeneousForm& pi) {
  const double nrm = coeff_norm(pi);
  if (nrm == 0.0) throw std::invalid_argument("roots of the zero form");
  const int m = pi.degree();
  RootSet rs;
  int top = m;
  const double zero_tol = 4.0 * std::numeric_limits<double>::epsilon() * nrm;
  while (top > 0 && std::abs(pi[top]) <= zero_tol) {
    --top;
    ++rs.divisible_by_y;
  }
  rs.leading = pi[top];
  const int n = top;
  if (n == 0) return rs;
  using C = std::complex<double>;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -pi[i] / rs.leading;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("companion eigenvalue solve failed");
  auto eval = [&](C r, C& dp) {
    C p(0.0);
    dp = C(0.0);
    for (int i = n; i >= 0; --i) {
      dp = dp * r + p;
      p = p * r + pi[i];
    }
    return p;
  };
  for (int i = 0; i < n; ++i) {
    C r = es.eigenvalues()[i];
    // Newton polish; a step is kept only if the residual drops.
    for (int it = 0; it < 3; ++it) {
      C dp;
      const C p = eval(r, dp);
      if (std::abs(dp) == 0.0) break;
      const C cand = r - p / dp;
      C dq;
      if (std::abs(eval(cand, dq)) < std::abs(p)) {
        r = cand;
      } else {
        break;
      }
    }
    rs.roots.push_back(r);
  }
  // Conjugate pairs are restored exactly so reconstruction stays real.
  for (auto& r : rs.roots) {
    if (std::abs(r.imag()) <= 1e-14 * (1.0 + std::abs(r))) r = C(r.real(), 0.0);
  }
  std::sort(rs.roots.begin(), rs.roots.end(), [](const C& a, const C& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return rs;
}

namespace {

using Cplx = std::complex<double>;

double chordal(const Cplx& a, bool ainf, const Cplx& b, bool binf) {
  if (ainf && binf) return 0.0;
  if (ainf) return 1.0 / std::sqrt(1.0 + std::norm(b));
  if (binf) return 1.0 / std::sqrt(1.0 + std::norm(a));
  return std::abs(a - b) / (std::sqrt(1.0 + std::norm(a)) * std::sqrt(1.0 + std::norm(b)));
}

struct ChartPoint {
  Cplx z;
};

// Taylor coefficients t_j = P^(j)(c)/j! of P(z) = sum_i b_i z^i, with a
// rounding-noise bound for each.
void taylor_at(const std::vector<double>& b, Cplx c, std::vector<Cplx>& t, std::vector<double>& noise) {
  const int n = static_cast<int>(b.size()) - 1;
  t.assign(static_cast<std::size_t>(n) + 1, Cplx(0.0));
  noise.assign(static_cast<std::size_t>(n) + 1, 0.0);
  const double eps = std::numeric_limits<double>::epsilon();
  const double ac = std::abs(c);
  for (int j = 0; j <= n; ++j) {
    for (int i = j; i <= n; ++i) {
      const double w = binom(i, j);
      t[j] += b[i] * w * std::pow(c, i - j);
      noise[j] += 16.0 * eps * (i + 1) * std::abs(b[i]) * w * std::pow(ac, i - j);
    }
  }
}

}  // namespace

std::vector<RootCluster> root_clusters(const HomogeneousForm& pi, double tol) {
  const RootSet rs = roots(pi);
  const int m = pi.degree();
  // Points on the Riemann sphere: affine roots plus `divisible_by_y` copies of infinity.
  struct Pt {
    Cplx r;
    bool inf;
  };
  std::vector<Pt> pts;
  for (const auto& r : rs.roots) pts.push_back({r, false});
  for (int i = 0; i < rs.divisible_by_y; ++i) pts.push_back({Cplx(0.0), true});
  const int n = static_cast<int>(pts.size());

  // Coefficients in the two affine charts: z = x/y (P(z) = sum a_i z^i) and
  // w = y/x (Q(w) = sum a_i w^(m-i)).
  std::vector<double> bz(pi.coeffs().begin(), pi.coeffs().end());
  std::vector<double> bw(bz.rbegin(), bz.rend());

  auto cluster_ok = [&](const std::vector<int>& members, Cplx& center, bool& at_inf) {
    const int k = static_cast<int>(members.size());
    // Chart choice: roots of modulus <= 1 in z, otherwise in w = 1/z.
    int in_z = 0;
    for (int idx : members) {
      if (!pts[idx].inf && std::abs(pts[idx].r) <= 1.0) ++in_z;
    }
    const bool use_z = 2 * in_z >= k;
    Cplx c(0.0);
    for (int idx : members) {
      const auto& p = pts[idx];
      c += use_z ? p.r : (p.inf ? Cplx(0.0) : 1.0 / p.r);
    }
    c /= static_cast<double>(k);
    std::vector<Cplx> t;
    std::vector<double> noise;
    taylor_at(use_z ? bz : bw, c, t, noise);
    if (k >= static_cast<int>(t.size())) return false;
    // A k-fold root is a simple root of P^(k-1): Newton on it sharpens the mean.
    for (int it = 0; it < 4 && std::abs(t[k]) > 0.0; ++it) {
      const Cplx step = -t[k - 1] / (static_cast<double>(k) * t[k]);
      if (!(std::abs(step) < 0.1 * (1.0 + std::abs(c)))) break;
      c += step;
      taylor_at(use_z ? bz : bw, c, t, noise);
    }
    const double tk = std::abs(t[k]);
    if (!(tk > 10.0 * noise[k])) return false;
    for (int j = 0; j < k; ++j) {
      if (std::abs(t[j]) > binom(k, j) * std::pow(tol, k - j) * tk + noise[j]) return false;
    }
    if (use_z) {
      center = c;
      at_inf = false;
    } else if (std::abs(c) == 0.0) {
      center = Cplx(0.0);
      at_inf = true;
    } else {
      center = 1.0 / c;
      at_inf = false;
    }
    return true;
  };

  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::vector<RootCluster> out;
  // Largest clusters first.
  for (int k = n; k >= 1; --k) {
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      std::vector<std::pair<double, int>> near;
      for (int j = 0; j < n; ++j) {
        if (!used[j]) near.push_back({chordal(pts[i].r, pts[i].inf, pts[j].r, pts[j].inf), j});
      }
      if (static_cast<int>(near.size()) < k) continue;
      std::sort(near.begin(), near.end());
      std::vector<int> members;
      for (int q = 0; q < k; ++q) members.push_back(near[q].second);
      Cplx center;
      bool at_inf = false;
      if (k == 1) {
        center = pts[i].r;
        at_inf = pts[i].inf;
      } else if (!cluster_ok(members, center, at_inf)) {
        continue;
      }
      for (int idx : members) used[idx] = true;
      if (!at_inf && std::abs(center.imag()) <= 1e-14 * (1.0 + std::abs(center))) center = Cplx(center.real(), 0.0);
      out.push_back({center, at_inf, k});
    }
  }
  (void)m;
  return out;
}

int multiplicity_class(const HomogeneousForm& pi, double tol) {
  int best = 0;
  for (const auto& c : root_clusters(pi, tol)) best = std::max(best, c.size);
  return best;
}

HomogeneousForm taylor_form(std::span<const double> partials) {
  const int m = static_cast<int>(partials.size()) - 1;
  std::vector<double> c(partials.size());
  for (int k = 0; k <= m; ++k) c[k] = partials[k] / (factorial(k) * factorial(m - k));
  return HomogeneousForm(std::move(c));
}

HomogeneousForm cubic_from_binomial(double a, double b, double c, double d) {
  return HomogeneousForm({d, 3.0 * c, 3.0 * b, a});
}

std::array<double, 5> quartic_binomial_coeffs(const HomogeneousForm& pi) {
  if (pi.degree() != 4) throw std::invalid_argument("quartic form required");
  return {pi[4], pi[3] / 4.0, pi[2] / 6.0, pi[1] / 4.0, pi[0]};
}

}  // namespace anisoshape
