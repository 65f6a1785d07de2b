#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "anisoshape/shapefn.hpp"

namespace anisoshape {

namespace {

using Cplx = std::complex<double>;

// Rotation angle maximizing |pi(cos, sin)| so that no root sits at infinity.
double root_rotation(const HomogeneousForm& pi) {
  double best = -1.0, arg = 0.0;
  for (int k = 0; k < 360; ++k) {
    const double th = std::numbers::pi * k / 360;
    const double v = std::abs(pi(std::cos(th), std::sin(th)));
    if (v > best) {
      best = v;
      arg = th;
    }
  }
  return arg;
}

struct CycValues {
  std::vector<Cplx> values;  // cyc / scale
  double scale = 0.0;        // largest |cyc|
};

// Roots are clustered on pi itself and then moved by the rotation, so that
// exactly repeated roots stay exactly repeated.
CycValues cyc_values(const HomogeneousForm& pi) {
  const int m = pi.degree();
  const LinearMap2 rot = rotation(root_rotation(pi));
  const LinearMap2 inv = rot.transpose();
  std::vector<Cplx> r;
  for (const auto& c : root_clusters(pi)) {
    // Zero of pi at (c, 1), or (1, 0) at infinity; pi o rot vanishes at inv * that point.
    const Cplx x = c.at_infinity ? Cplx(1.0) : c.center, y = c.at_infinity ? Cplx(0.0) : Cplx(1.0);
    const Cplx rx = inv(0, 0) * x + inv(0, 1) * y, ry = inv(1, 0) * x + inv(1, 1) * y;
    for (int k = 0; k < c.size; ++k) r.push_back(rx / ry);
  }
  if (static_cast<int>(r.size()) != m) throw std::runtime_error("root extraction lost roots");
  // Exact conjugate pairs keep the permutation sum real.
  std::vector<bool> paired(r.size(), false);
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (paired[i] || r[i].imag() == 0.0) continue;
    std::size_t best = i;
    double dist = INFINITY;
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j == i || paired[j] || r[j].imag() * r[i].imag() >= 0) continue;
      const double e = std::abs(r[j] - std::conj(r[i]));
      if (e < dist) {
        dist = e;
        best = j;
      }
    }
    if (best == i) continue;
    r[best] = std::conj(r[i]);
    paired[i] = paired[best] = true;
  }
  const double lam = pi(rot(0, 0), rot(1, 0));
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  CycValues out;
  do {
    Cplx prod = lam * lam * lam * lam;
    for (int i = 0; i < m; ++i) {
      const Cplx d = r[perm[i]] - r[perm[(i + 1) % m]];
      prod *= d * d;
    }
    out.values.push_back(prod);
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (const auto& v : out.values) out.scale = std::max(out.scale, std::abs(v));
  if (out.scale > 0) {
    for (auto& v : out.values) v /= out.scale;
  }
  return out;
}

// Q_d / scale^d, checked for a negligible imaginary part.
double scaled_Qd(const CycValues& c, int d) {
  Cplx sum(0.0);
  double mag = 0.0;
  for (const auto& v : c.values) {
    const Cplx t = std::pow(v, d);
    sum += t;
    mag += std::abs(t);
  }
  if (std::abs(sum.imag()) > 1e-8 * std::max(mag, 1e-300)) {
    throw std::runtime_error("Q_d has a non-negligible imaginary part");
  }
  return sum.real();
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

double invariant_Qd(const HomogeneousForm& pi, int d) {
  if (pi.is_zero()) throw std::invalid_argument("invariant of the zero form");
  if (d < 1) throw std::invalid_argument("Q_d needs d >= 1");
  if (pi.degree() > 5) throw std::invalid_argument("Q_d is limited to degree <= 5");
  const CycValues c = cyc_values(pi);
  if (c.scale == 0.0) return 0.0;
  return std::pow(c.scale, d) * scaled_Qd(c, d);
}

double invariant_equiv(const HomogeneousForm& pi) {
  const int m = pi.degree();
  if (m < 2 || m > 5) throw std::invalid_argument("invariant equivalent needs 2 <= m <= 5");
  if (pi.is_zero()) return 0.0;
  const CycValues c = cyc_values(pi);
  if (c.scale == 0.0) return 0.0;
  double best = 0.0;
  const int dmax = static_cast<int>(factorial(m));
  for (int d = 1; d <= dmax; ++d) {
    const double q = std::abs(scaled_Qd(c, d));
    best = std::max(best, std::pow(c.scale, 0.25) * std::pow(q, 1.0 / (4.0 * d)));
  }
  return best;
}

std::array<double, 2> quartic_IJ(const HomogeneousForm& pi) {
  if (pi.degree() != 4) throw std::invalid_argument("quartic_IJ needs a quartic");
  // Integer weights on the plain coefficients: 12 I and 432 J.
  const double e = pi[0], d = pi[1], c = pi[2], b = pi[3], a = pi[4];
  const double i12 = 12 * a * e - 3 * b * d + c * c;
  const double j432 = 72 * a * c * e - 27 * a * d * d - 27 * b * b * e + 9 * b * c * d - 2 * c * c * c;
  return {i12 / 12, j432 / 432};
}

double invariant_equiv4(const HomogeneousForm& pi) {
  const auto [i, j] = quartic_IJ(pi);
  return std::pow(std::pow(std::abs(i), 3) + j * j, 1.0 / 6.0);
}

}  // namespace anisoshape
