// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "anisoshape/corpus.hpp"
#include "anisoshape/meshgen.hpp"
#include "anisoshape/metric.hpp"
#include "anisoshape/shapefn.hpp"
#include "anisoshape/study.hpp"
#include "support.hpp"

using namespace anisoshape;
using namespace testing_support;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Collects failures with a short message each; keeps the first few.
struct Tally {
  int checks = 0;
  int failures = 0;
  std::string first;

  void expect(bool cond, const std::string& what) {
    ++checks;
    if (cond) return;
    if (failures++ < 3) first += (first.empty() ? "" : "; ") + what;
  }
  Outcome outcome(std::string extra) const {
    Outcome o;
    o.ok = failures == 0;
    o.detail = std::to_string(checks - failures) + "/" + std::to_string(checks) + " checks";
    if (!extra.empty()) o.detail += ", " + extra;
    if (!o.ok) o.detail += ", failed: " + first;
    return o;
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

HomogeneousForm random_cubic_distinct_thresholds() {
  for (;;) {
    const auto p = random_form(3);
    const auto th = regime_thresholds(p);
    const double gap = 0.05 * th.mu;
    if (th.beta > gap && th.alpha_star - th.beta > gap && th.mu - th.alpha_star > gap) return p;
  }
}

// Random form of degree m with det/disc sign `sign` and invariant bounded away from zero.
HomogeneousForm random_signed_form(int m, int sign) {
  for (;;) {
    const auto p = random_form(m);
    const double n = coeff_norm(p);
    const double inv = m == 2 ? det2(p) / (n * n) : disc3(p) / std::pow(n, 4);
    if (inv * sign >= 0.05) return p;
  }
}

Outcome invariance() {
  Tally t;
  for (int m : {2, 3, 4}) {
    for (int k = 0; k < 100; ++k) {
      const auto pi = random_form(m);
      const LinearMap2 phi = random_map(2.0);
      const double d = phi.determinant();
      const auto moved = compose(pi, phi);
      const std::string tag = "m=" + std::to_string(m) + " k=" + std::to_string(k);
      if (m == 2) t.expect(rel(det2(moved), d * d * det2(pi)) < 1e-8, "det2 " + tag);
      if (m == 3) t.expect(rel(disc3(moved), std::pow(d, 6) * disc3(pi)) < 1e-8, "disc3 " + tag);
      // Q_d has coefficient degree 4d, hence weight 2dm.
      for (int qd = 1; qd <= 3; ++qd) {
        t.expect(rel(invariant_Qd(moved, qd), std::pow(std::abs(d), 2 * qd * m) * invariant_Qd(pi, qd)) < 1e-8,
                 "Q_" + std::to_string(qd) + " " + tag);
      }
    }
  }
  double worst = 0.0;
  for (int m : {2, 3, 4}) {
    for (int k = 0; k < 100; ++k) {
      const auto pi = random_form(m);
      const LinearMap2 phi = random_map(1.5);
      const double lhs = shape_oracle(compose(pi, phi)).value;
      const double rhs = std::pow(std::abs(phi.determinant()), m / 2.0) * shape_oracle(pi).value;
      worst = std::max(worst, rel(lhs, rhs));
      t.expect(rel(lhs, rhs) < 0.03, "oracle m=" + std::to_string(m));
    }
  }
  return t.outcome(fmt("worst oracle deviation %.3g", worst));
}

Outcome closed_vs_oracle() {
  Tally t;
  double lo2 = INFINITY, hi2 = 0, lo3 = INFINITY, hi3 = 0;
  for (int m : {2, 3}) {
    for (int sign : {1, -1}) {
      for (int k = 0; k < 50; ++k) {
        const auto pi = random_signed_form(m, sign);
        const double r = shape_oracle(pi).value / shape_closed(pi, 2.0);
        (m == 2 ? lo2 : lo3) = std::min(m == 2 ? lo2 : lo3, r);
        (m == 2 ? hi2 : hi3) = std::max(m == 2 ? hi2 : hi3, r);
        const double tol = m == 2 ? 0.03 : 0.05;
        t.expect(std::abs(r - 1) <= tol, "m=" + std::to_string(m) + " ratio " + std::to_string(r));
      }
    }
  }
  return t.outcome(fmt("m=2 ratios [%.4f, %.4f]", lo2, hi2) + fmt(", m=3 ratios [%.4f, %.4f]", lo3, hi3));
}

Outcome cubic_metric() {
  Tally t;
  double worst_area = 0.0;
  int positive = 0;
  for (int k = 0; positive < 50 || k < 100; ++k) {
    const auto pi = random_form(3);
    const double d = disc3(pi);
    if (std::abs(d) < 0.05) continue;
    const auto h = hmatrix3(pi);
    const double expect = d > 0 ? std::pow(2.0, -2.0 / 3.0) / 3.0 * std::cbrt(d) : std::cbrt(std::abs(d)) / 3.0;
    t.expect(rel(h.det(), expect) < 1e-8, "det identity");
    t.expect(levelset_margin(h, pi) >= 1 - 1e-8, "feasibility");
    if (k < 30) {
      const double r = rel(h.ellipse_area(), shape_ellipse(pi).area);
      worst_area = std::max(worst_area, r);
      t.expect(r < 0.02, "ellipse area");
    }
    if (d > 0 && positive < 50) {
      ++positive;
      // a x^3 + 3b x^2y + 3c xy^2 + d y^3
      const double a = pi[3], b = pi[2] / 3, c = pi[1] / 3, e = pi[0];
      const double s = std::pow(2.0, -1.0 / 3.0) * 3.0 * std::cbrt(1.0 / d);
      const SymMetric2 formula(s * 2 * (b * b - a * c), s * (b * c - a * e), s * 2 * (c * c - b * e));
      t.expect(formula.distance(h) <= 1e-8 * std::max(1.0, h.trace()), "coefficient formula");
    }
  }
  return t.outcome(fmt("worst ellipse area deviation %.3g", worst_area));
}

Outcome regimes() {
  Tally t;
  std::vector<HomogeneousForm> forms{HomogeneousForm({0, 3, 0, 1}), HomogeneousForm({0, -3, 0, 1}),
                                     HomogeneousForm({0, 0, 1, 0}), HomogeneousForm({0, -1, 0, 1})};
  for (int k = 0; k < 20; ++k) forms.push_back(random_cubic_distinct_thresholds());
  double worst_jump = 0.0;
  for (const auto& pi : forms) {
    const auto th = regime_thresholds(pi);
    for (double a : {th.mu, th.alpha_star, th.beta}) {
      if (a <= 1e-5) continue;
      const double jump = hmatrix3_constrained(pi, a - 1e-6).distance(hmatrix3_constrained(pi, a + 1e-6));
      worst_jump = std::max(worst_jump, jump);
      t.expect(jump < 1e-4, "continuity " + pi.to_string());
    }
    const double top = std::max(1.2 * th.mu, 0.1);
    double prev = 0.0;
    for (int i = 1; i <= 60; ++i) {
      const double a = top * i / 60;
      const auto h = hmatrix3_constrained(pi, a);
      t.expect(h.min_eigenvalue() >= a * (1 - 1e-8), "H >= alpha " + pi.to_string());
      t.expect(levelset_margin(h, pi) >= 1 - 1e-6, "feasibility " + pi.to_string());
      t.expect(h.det() >= prev * (1 - 1e-9), "monotone det " + pi.to_string());
      prev = h.det();
    }
  }
  for (const auto& [pi, v] : {std::pair{HomogeneousForm({0, 3, 0, 1}), std::cbrt(2.0)},
                              std::pair{HomogeneousForm({0, -3, 0, 1}), 1.0}}) {
    const auto th = regime_thresholds(pi);
    for (double x : {th.mu, th.alpha_star, th.beta}) t.expect(std::abs(x - v) < 1e-6, "collapsed " + pi.to_string());
  }
  return t.outcome(std::to_string(forms.size()) + " cubics" + fmt(", worst jump %.3g", worst_jump));
}

// Multiple of 1/8 in [lo, hi]: products stay exact, so the generated forms are exact null forms.
double dyadic(double lo, double hi) { return std::round(8 * uniform(lo, hi)) / 8; }

// Form with a root of multiplicity null_multiplicity(m).
HomogeneousForm null_form(int m, int k) {
  const int s = null_multiplicity(m);
  RootSet rs;
  rs.leading = dyadic(0.5, 2) * (k % 2 ? 1 : -1);
  int rest = m - s;
  if (k % 5 == 0) {
    rs.divisible_by_y = s;
  } else {
    const double r = dyadic(-2, 2);
    for (int i = 0; i < s; ++i) rs.roots.emplace_back(r, 0.0);
  }
  while (rest >= 2 && k % 3 == 0) {
    const std::complex<double> z(dyadic(-2, 2), dyadic(0.25, 2));
    rs.roots.push_back(z);
    rs.roots.push_back(std::conj(z));
    rest -= 2;
  }
  for (; rest > 0; --rest) rs.roots.emplace_back(dyadic(-2, 2), 0.0);
  return rs.reconstruct();
}

Outcome invariant_equivalents() {
  Tally t;
  double worst_null = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int m = 2 + k % 4;
    const auto pi = null_form(m, k);
    const double n = coeff_norm(pi);
    const double v = invariant_equiv(pi) / n;
    worst_null = std::max(worst_null, v);
    t.expect(v < 1e-6, "null Keq m=" + std::to_string(m) + " " + pi.to_string());
    if (m == 4) t.expect(invariant_equiv4(pi) < 1e-6 * n, "null Keq4 " + pi.to_string());
  }
  double smallest = INFINITY;
  for (int k = 0; k < 50; ++k) {
    const int m = 2 + k % 4;
    const auto pi = random_form(m);
    const double n = coeff_norm(pi);
    smallest = std::min(smallest, invariant_equiv(pi) / n);
    t.expect(invariant_equiv(pi) > 1e-3 * n, "generic Keq m=" + std::to_string(m));
    if (m == 4) t.expect(invariant_equiv4(pi) > 1e-3 * n, "generic Keq4");
  }
  for (int k = 0; k < 50; ++k) {
    const auto pi = random_form(2);
    t.expect(rel(invariant_Qd(pi, 1), 32 * det2(pi) * det2(pi)) < 1e-9, "Q_1 = 32 det2^2");
  }
  double lo = INFINITY, hi = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto pi = random_form(4);
    const double r = invariant_equiv4(pi) / shape_oracle(pi).value;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  t.expect(hi / lo < 20, "Keq4/K spread " + std::to_string(hi / lo));
  return t.outcome(fmt("max null Keq/|pi| %.2g", worst_null) + fmt(", min generic %.3g", smallest) +
                   fmt(", Keq4/K in [%.4g, %.4g]", lo, hi));
}

Outcome ellipse_discontinuity() {
  Tally t;
  const double base = shape_ellipse(HomogeneousForm({0, 0, 1, 0, 0})).value;
  double lo = INFINITY, hi = 0.0;
  for (double eps : {0.01, 0.1, 1.0}) {
    const double v = shape_ellipse(HomogeneousForm({-eps, 0, 1, 0, 0})).value;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  t.expect(hi / lo - 1 < 0.02, "variation");
  t.expect(hi <= 0.9 * base, "gap");
  return t.outcome(fmt("K^E in [%.6g, %.6g]", lo, hi) + fmt(", at eps=0: %.6g", base));
}

const std::vector<int> kSweep{500, 1000, 2000, 4000};

Outcome convergence() {
  Tally t;
  std::string summary;
  for (const auto& [name, m] : std::vector<std::pair<const char*, int>>{
           {"isoquad", 2}, {"saddle", 2}, {"hyp", 2}, {"cubsum", 3}, {"cubaniso", 3}}) {
    const auto rows = converge_study(corpus_function(name), m, 2.0, Strategy::adapted, kSweep);
    double lo = INFINITY, hi = 0.0;
    for (const auto& r : rows) {
      t.expect(r.failure.empty(), std::string(name) + " " + r.failure);
      lo = std::min(lo, r.scaled);
      hi = std::max(hi, r.scaled);
    }
    const double last = rows.back().ratio;
    t.expect(last >= 0.75 && last <= 1.5, std::string(name) + " ratio " + std::to_string(last));
    t.expect(hi / lo <= 1.6, std::string(name) + " spread " + std::to_string(hi / lo));
    summary += std::string(summary.empty() ? "" : " ") + name + fmt("=%.3f/%.2f", last, hi / lo);
    if (std::string(name) == "cubaniso") {
      const auto uni = converge_study(corpus_function(name), m, 2.0, Strategy::uniform, kSweep);
      for (std::size_t i = 0; i < rows.size(); ++i)
        t.expect(uni[i].ratio > rows[i].ratio, "cubaniso uniform not larger at N=" + std::to_string(kSweep[i]));
    }
  }
  return t.outcome("ratio/spread " + summary);
}

Outcome mesh_validity() {
  Tally t;
  double worst_growth = 0.0, worst_equi = 0.0;
  for (const auto& [name, m] : std::vector<std::pair<const char*, int>>{
           {"isoquad", 2}, {"saddle", 2}, {"hyp", 2}, {"cubsum", 3}, {"cubaniso", 3}, {"saddleaniso", 2}}) {
    const auto& f = corpus_function(name);
    const ScalarField field = f.field(m);
    const bool anisotropic = std::string(name) != "isoquad" && std::string(name) != "cubsum";
    double lo = INFINITY, hi = 0.0;
    for (int n : kSweep) {
      const AdaptResult r = adapt_mesh_full(field, f.domain, m, 2.0, n);
      const std::string tag = std::string(name) + " N=" + std::to_string(n);
      t.expect(check_conforming(r.mesh, &f.domain).ok, "conformity " + tag);
      lo = std::min(lo, r.admissibility);
      hi = std::max(hi, r.admissibility);
      if (anisotropic) {
        const double ratio = equidistribution_report(field, r.mesh, m, 2.0).ratio;
        worst_equi = std::max(worst_equi, ratio);
        t.expect(ratio < 10, "equidistribution " + tag + " " + std::to_string(ratio));
      }
    }
    worst_growth = std::max(worst_growth, hi / lo - 1);
    t.expect(hi / lo <= 1.5, std::string(name) + " admissibility growth " + std::to_string(hi / lo));
  }
  return t.outcome(fmt("worst admissibility growth %.1f%%", 100 * worst_growth) +
                   fmt(", worst equidistribution ratio %.2f", worst_equi));
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "invariance identities and oracle invariance", 120, invariance},
      {2, "closed form vs oracle", 300, closed_vs_oracle},
      {3, "cubic metric identities and feasibility", 120, cubic_metric},
      {4, "constrained cubic metric regimes", 120, regimes},
      {5, "invariant equivalents", 180, invariant_equivalents},
      {6, "ellipse shape function discontinuity", 60, ellipse_discontinuity},
      {7, "convergence law", 900, convergence},
      {8, "mesh validity", 900, mesh_validity},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > c.limit_seconds) {
      o.ok = false;
      o.detail += fmt(", runtime over %.0f s", c.limit_seconds);
    }
    if (!o.ok) ++failed;
    std::printf("%s [%d] %s: %s (%.1f s)\n", o.ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), dt);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
