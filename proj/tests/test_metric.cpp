#include <cmath>
#include <numbers>

#include "anisoshape/metric.hpp"
#include "anisoshape/shapefn.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace anisoshape;
using namespace testing_support;

namespace {

HomogeneousForm random_cubic_with_disc(double lo, double hi) {
  for (;;) {
    const auto p = random_form(3);
    const double d = std::abs(disc3(p));
    if (d >= lo && d <= hi) return p;
  }
}

// Thresholds beta < alpha_pi < mu separated by at least 5% of mu.
HomogeneousForm random_cubic_distinct_thresholds() {
  for (;;) {
    const auto p = random_form(3);
    const auto th = regime_thresholds(p);
    const double gap = 0.05 * th.mu;
    if (th.beta > gap && th.alpha_star - th.beta > gap && th.mu - th.alpha_star > gap) return p;
  }
}

}  // namespace

TEST_CASE("SymMetric2 basics") {
  const SymMetric2 h(2, 0.5, 1);
  CHECK(h.det() == doctest::Approx(1.75));
  const auto ev = h.eigenvalues();
  CHECK(ev[0] * ev[1] == doctest::Approx(1.75));
  CHECK(ev[0] + ev[1] == doctest::Approx(3));
  CHECK(SymMetric2::identity().ellipse_area() == doctest::Approx(std::numbers::pi));
  CHECK(std::isinf(SymMetric2(1, 0, 0).ellipse_area()));
}

TEST_CASE("cubic normalization") {
  for (const auto& pi : {HomogeneousForm({0, -3, 0, 1}), HomogeneousForm({1, 0, -3, 0}), HomogeneousForm({0, -1, 0, 1}),
                         HomogeneousForm({0, 3, 0, 1})}) {
    const auto n = normalize_cubic(pi);
    CHECK(coeff_norm(compose(pi, n.phi) - n.normal_form) < 1e-8);
  }
  for (int k = 0; k < 30; ++k) {
    const auto pi = random_cubic_with_disc(0.01, 100);
    const auto n = normalize_cubic(pi);
    CHECK(n.disc_sign == (disc3(pi) > 0 ? 1 : -1));
    CHECK(coeff_norm(compose(pi, n.phi) - n.normal_form) < 1e-8);
  }
  CHECK_THROWS_AS(normalize_cubic(HomogeneousForm({0, 0, 1, 0})), std::invalid_argument);
}

TEST_CASE("quadratic metrics") {
  CHECK(hmatrix2(HomogeneousForm({1, 0, 1})).distance(SymMetric2::identity()) < 1e-14);
  CHECK(hmatrix2(HomogeneousForm({-1, 0, 1})).distance(SymMetric2::identity()) < 1e-14);
  CHECK(hmatrix2(HomogeneousForm({-4, 0, 1})).distance(SymMetric2(1, 0, 4)) < 1e-14);
  CHECK(hmatrix2_constrained(HomogeneousForm({0, 0, 1}), 0.5).distance(SymMetric2(1, 0, 0.5)) < 1e-14);
  CHECK(hmatrix2_constrained(HomogeneousForm({1, 0, 1}), 0.5).distance(SymMetric2::identity()) < 1e-14);
  CHECK(hmatrix2_constrained(HomogeneousForm::zero(2), 1.0).distance(SymMetric2::identity()) < 1e-14);
  for (int k = 0; k < 20; ++k) {
    const auto pi = random_form(2);
    CHECK(levelset_margin(hmatrix2(pi), pi) >= 1 - 1e-9);
  }
}

TEST_CASE("cubic metric identities") {
  CHECK(hmatrix3(HomogeneousForm({0, -3, 0, 1})).distance(SymMetric2::identity()) < 1e-9);
  CHECK(hmatrix3(HomogeneousForm({0, 3, 0, 1})).distance(SymMetric2::identity(std::cbrt(2.0))) < 1e-9);
  for (int k = 0; k < 30; ++k) {
    const auto pi = random_cubic_with_disc(0.1, 50);
    const double d = disc3(pi);
    const auto h = hmatrix3(pi);
    const double expect = d > 0 ? std::pow(2.0, -2.0 / 3.0) / 3.0 * std::cbrt(d) : std::cbrt(std::abs(d)) / 3.0;
    CHECK(rel(h.det(), expect) < 1e-8);
    CHECK(levelset_margin(h, pi) >= 1 - 1e-6);
    if (d > 0) {
      // a x^3 + 3b x^2y + 3c xy^2 + d y^3
      const double a = pi[3], b = pi[2] / 3, c = pi[1] / 3, dd = pi[0];
      const double s = std::pow(2.0, -1.0 / 3.0) * 3.0 * std::cbrt(1.0 / d);
      const SymMetric2 formula(s * 2 * (b * b - a * c), s * (b * c - a * dd), s * 2 * (c * c - b * dd));
      CHECK(formula.distance(h) <= 1e-8 * std::max(1.0, h.trace()));
    }
    const LinearMap2 phi = random_map(1.5);
    const auto lhs = hmatrix3(compose(pi, phi));
    const auto rhs = h.congruence(phi);
    CHECK(lhs.distance(rhs) <= 1e-7 * rhs.trace());
  }
}

TEST_CASE("cubic metric vs ellipse maximizer") {
  for (int k = 0; k < 5; ++k) {
    const auto pi = random_cubic_with_disc(0.5, 50);
    CHECK(rel(hmatrix3(pi).ellipse_area(), shape_ellipse(pi).area) < 0.02);
  }
}

TEST_CASE("regime thresholds") {
  const auto plus = regime_thresholds(HomogeneousForm({0, 3, 0, 1}));
  CHECK(plus.mu == doctest::Approx(std::cbrt(2.0)).epsilon(1e-9));
  CHECK(plus.alpha_star == doctest::Approx(std::cbrt(2.0)).epsilon(1e-6));
  CHECK(plus.beta == doctest::Approx(std::cbrt(2.0)).epsilon(1e-6));
  const auto minus = regime_thresholds(HomogeneousForm({0, -3, 0, 1}));
  CHECK(minus.mu == doctest::Approx(1).epsilon(1e-9));
  CHECK(minus.alpha_star == doctest::Approx(1).epsilon(1e-6));
  CHECK(minus.beta == doctest::Approx(1).epsilon(1e-6));
  const auto cube = regime_thresholds(HomogeneousForm({0, 0, 0, 1}));
  CHECK(cube.alpha_star == 0.0);
  CHECK(cube.beta == 0.0);
  for (int k = 0; k < 10; ++k) {
    const auto pi = random_form(3);
    const auto th = regime_thresholds(pi);
    CHECK(th.beta <= th.alpha_star);
    CHECK(th.alpha_star <= th.mu);
    CHECK(std::abs(pi(th.z_pi)) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(th.z_pi.norm() == doctest::Approx(1 / std::sqrt(th.mu)).epsilon(1e-8));
  }
}

TEST_CASE("constrained cubic metric") {
  const HomogeneousForm plus({0, 3, 0, 1});
  CHECK(hmatrix3_constrained(plus, 4.0).distance(SymMetric2::identity(4.0)) < 1e-12);
  CHECK(hmatrix3_constrained(plus, 1.0).distance(SymMetric2::identity(std::cbrt(2.0))) < 1e-9);
  const HomogeneousForm x2y({0, 0, 1, 0});
  for (double a : {0.01, 0.1, 0.3, 0.5}) {
    const auto c = hmatrix3_constrained_full(x2y, a);
    CHECK(c.regime == 3);
    CHECK(!c.fallback);
    CHECK(c.h.min_eigenvalue() == doctest::Approx(a).epsilon(1e-8));
    CHECK(levelset_margin(c.h, x2y) >= 1 - 1e-6);
  }
  CHECK_THROWS_AS(hmatrix3_constrained(plus, 0.0), std::invalid_argument);
}

TEST_CASE("constrained continuity and monotonicity") {
  std::vector<HomogeneousForm> forms{HomogeneousForm({0.3, -1.2, 0.7, 0.5}), HomogeneousForm({0, 0, 1, 0})};
  for (int k = 0; k < 6; ++k) forms.push_back(random_cubic_distinct_thresholds());
  for (const auto& pi : forms) {
    const auto th = regime_thresholds(pi);
    for (double t : {th.mu, th.alpha_star, th.beta}) {
      if (t <= 1e-5) continue;
      const auto lo = hmatrix3_constrained(pi, t - 1e-6);
      const auto hi = hmatrix3_constrained(pi, t + 1e-6);
      CHECK(lo.distance(hi) < 1e-4);
    }
    double prev = 0.0;
    for (int i = 1; i <= 50; ++i) {
      const double a = 1.2 * th.mu * i / 50;
      const auto h = hmatrix3_constrained(pi, a);
      CHECK(h.det() >= prev * (1 - 1e-9));
      CHECK(h.min_eigenvalue() >= a * (1 - 1e-8));
      CHECK(levelset_margin(h, pi) >= 1 - 1e-6);
      prev = h.det();
    }
  }
}

TEST_CASE("overfitting sentinel for quartics") {
  // The unit disc lies in the level set of x^2y^2 + t y^4 for t in [-1, 1].
  for (double t : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    CHECK(levelset_margin(SymMetric2::identity(), HomogeneousForm({t, 0, 1, 0, 0})) >= 1 - 1e-9);
  }
  const double disc_area = std::numbers::pi;
  const double sminus = shape_ellipse(HomogeneousForm({-1, 0, 1, 0, 0})).area;
  CHECK(rel(sminus, disc_area * std::sqrt(2 * (std::sqrt(2.0) + 1))) < 0.02);
  const auto splus = shape_ellipse(HomogeneousForm({1, 0, 1, 0, 0}));
  CHECK(splus.area <= 2 * disc_area * 1.02);
  CHECK(splus.area >= 2 * disc_area * 0.98);
  CHECK(splus.area <= sminus);
}

TEST_CASE("metric field") {
  ScalarField iso;
  iso.value = [](double x, double y) { return x * x + y * y; };
  const Polygon sq = Polygon::unit_square();
  const MetricField f1(iso, sq, 2, 2.0, 1e-3);
  const MetricField f2(iso, sq, 2, 2.0, 2e-3);
  const auto h1 = f1(Point2(0.3, 0.4)), h2 = f2(Point2(0.7, 0.1));
  CHECK(rel(h2.h11, std::pow(2.0, -2.0 * 2 / (2 * 2 + 2)) * h1.h11) < 1e-6);
  CHECK(std::abs(h1.h12) < 1e-6 * h1.h11);

  ScalarField cub;
  cub.value = [](double x, double y) { return x * x * x - 3 * x * y * y; };
  cub.partials = [](double, double, int) { return std::vector<double>{0, -6, 0, 6}; };
  const MetricField f3(cub, sq, 3, 2.0, 1e-3);
  const auto s = f3.sample(Point2(0.5, 0.5));
  CHECK(s.form == HomogeneousForm({0, -3, 0, 1}));
  CHECK(rel(s.h.h11, s.h.h22) < 1e-9);

  ScalarField cube;
  cube.value = [](double x, double) { return x * x * x; };
  cube.partials = [](double, double, int) { return std::vector<double>{0, 0, 0, 6}; };
  const MetricField f4(cube, sq, 3, 2.0, 1e-3, 1.0);
  const auto s4 = f4.sample(Point2(0.5, 0.5));
  CHECK(!s4.degenerate);
  CHECK(s4.h.min_eigenvalue() >= (1.0 / (s4.alpha_z * s4.alpha_z)) * (1 - 1e-8));
  const MetricField f5(cube, sq, 3, 2.0, 1e-3, 0.0);
  CHECK(f5.sample(Point2(0.5, 0.5)).degenerate);
  CHECK_THROWS_AS(MetricField(cube, sq, 3, 2.0, 0.0), std::invalid_argument);
}
