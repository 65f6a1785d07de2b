#include <cmath>
#include <numbers>

#include "anisoshape/forms.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace anisoshape;
using namespace testing_support;

TEST_CASE("evaluate") {
  CHECK(HomogeneousForm({1, 0, 1})(1.0, 1.0) == doctest::Approx(2.0));
  CHECK(HomogeneousForm({0, -3, 0, 1})(1.0, 0.0) == doctest::Approx(1.0));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(HomogeneousForm({0, 3, 0, 1})(s, s) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("homogeneity") {
  for (int k = 0; k < 1000; ++k) {
    const int m = 1 + k % 6;
    const auto pi = random_form(m);
    const double lam = uniform(-3, 3);
    const Point2 z(uniform(-2, 2), uniform(-2, 2));
    const double bound = 1e-10 * coeff_norm(pi) * std::pow(std::max(1.0, (lam * z).norm()), m);
    CHECK(std::abs(pi(lam * z) - std::pow(lam, m) * pi(z)) <= bound);
  }
}

TEST_CASE("compose") {
  const HomogeneousForm x2({0, 0, 1});
  LinearMap2 d = LinearMap2::Identity();
  d(0, 0) = 2.0;
  CHECK(compose(x2, d) == HomogeneousForm({0, 0, 4}));
  const auto pi = random_form(4);
  CHECK(compose(pi, LinearMap2::Identity()) == pi);
  for (int trial = 0; trial < 5; ++trial) {
    const auto q = random_form(3 + trial % 3);
    const LinearMap2 phi = random_map(3.0);
    const auto c = compose(q, phi);
    for (int k = 0; k < 100; ++k) {
      const Point2 z(uniform(-1, 1), uniform(-1, 1));
      CHECK(std::abs(c(z) - q(phi * z)) <= 1e-12 * std::max(1.0, std::abs(q(phi * z))) * 10);
    }
    const LinearMap2 psi = random_map(2.0);
    const auto lhs = compose(compose(q, phi), psi);
    const auto rhs = compose(q, phi * psi);
    CHECK(coeff_norm(lhs - rhs) <= 1e-12 * coeff_norm(rhs) * 10);
  }
}

TEST_CASE("coefficient norm") {
  CHECK(coeff_norm(HomogeneousForm({0, 2, 1})) == 2.0);
  CHECK(coeff_norm(HomogeneousForm::zero(3)) == 0.0);
  CHECK(coeff_norm(HomogeneousForm({-3, 0, 0, 0, 0})) == 3.0);
}

TEST_CASE("det2 and disc3") {
  CHECK(det2(HomogeneousForm({1, 0, 1})) == 1.0);
  CHECK(det2(HomogeneousForm({-1, 0, 1})) == -1.0);
  CHECK(det2(HomogeneousForm({0, 1, 0})) == -0.25);
  CHECK(disc3(HomogeneousForm({0, -3, 0, 1})) == doctest::Approx(108));
  CHECK(disc3(HomogeneousForm({0, 0, 0, 1})) == 0.0);
  CHECK(disc3(HomogeneousForm({0, -1, 0, 1})) == doctest::Approx(4));
  CHECK_THROWS_AS(det2(HomogeneousForm({1, 0, 0, 1})), std::invalid_argument);
  CHECK_THROWS_AS(disc3(HomogeneousForm({1, 0, 1})), std::invalid_argument);
}

TEST_CASE("invariant transformation laws") {
  for (int k = 0; k < 100; ++k) {
    const auto p2 = random_form(2);
    const auto p3 = random_form(3);
    const LinearMap2 phi = random_map(2.0);
    const double d = phi.determinant();
    CHECK(rel(det2(compose(p2, phi)), d * d * det2(p2)) < 1e-9);
    CHECK(rel(disc3(compose(p3, phi)), std::pow(d, 6) * disc3(p3)) < 1e-9);
    const double lam = uniform(-3, 3);
    CHECK(rel(det2(lam * p2), lam * lam * det2(p2)) < 1e-12);
    CHECK(rel(disc3(lam * p3), std::pow(lam, 4) * disc3(p3)) < 1e-12);
  }
}

TEST_CASE("roots") {
  {
    const auto rs = roots(HomogeneousForm({-1, 0, 1}));
    CHECK(rs.leading == 1.0);
    REQUIRE(rs.roots.size() == 2);
    CHECK(rs.roots[0].real() == doctest::Approx(-1));
    CHECK(rs.roots[1].real() == doctest::Approx(1));
  }
  {
    const auto rs = roots(HomogeneousForm({0, -3, 0, 1}));
    REQUIRE(rs.roots.size() == 3);
    CHECK(rs.roots[0].real() == doctest::Approx(-std::sqrt(3.0)));
    CHECK(std::abs(rs.roots[1]) < 1e-14);
    CHECK(rs.roots[2].real() == doctest::Approx(std::sqrt(3.0)));
  }
  {
    const auto rs = roots(HomogeneousForm({0, 0, 1, 0}));
    CHECK(rs.divisible_by_y == 1);
    CHECK(rs.leading == 1.0);
    REQUIRE(rs.roots.size() == 2);
    CHECK(std::abs(rs.roots[0]) < 1e-12);
    CHECK(std::abs(rs.roots[1]) < 1e-12);
  }
  CHECK_THROWS_AS(roots(HomogeneousForm::zero(3)), std::invalid_argument);
  for (int k = 0; k < 200; ++k) {
    const auto pi = random_form(2 + k % 5);
    const auto back = roots(pi).reconstruct();
    CHECK(coeff_norm(back - pi) <= 1e-9 * coeff_norm(pi));
  }
}

TEST_CASE("multiplicity class") {
  CHECK(multiplicity_class(HomogeneousForm({0, 0, 1, 0})) == 2);
  CHECK(multiplicity_class(HomogeneousForm({0, -3, 0, 1})) == 1);
  CHECK(multiplicity_class(HomogeneousForm({1, 3, 3, 1})) == 3);
  CHECK(multiplicity_class(HomogeneousForm({0, 0, 0, 1})) == 3);
  CHECK(multiplicity_class(HomogeneousForm({1, 0, 0, 0})) == 3);
  // (x - 2y)^3 (x + y)
  CHECK(multiplicity_class(HomogeneousForm({-8, 4, 6, -5, 1})) == 3);
  CHECK(null_multiplicity(2) == 2);
  CHECK(null_multiplicity(3) == 2);
  CHECK(null_multiplicity(4) == 3);
}

TEST_CASE("conventions and parsing") {
  // x^3 - 3xy^2 in binomial weights: a = 1, c = -1.
  CHECK(cubic_from_binomial(1, 0, -1, 0) == HomogeneousForm({0, -3, 0, 1}));
  const auto q = quartic_binomial_coeffs(HomogeneousForm({1, 4, 6, 4, 1}));
  for (double v : q) CHECK(v == 1.0);
  // f = x^2 y: d^3 f/dx^2dy = 2, so d^3f/3! = x^2 y.
  const std::vector<double> partials{0, 0, 2, 0};
  CHECK(taylor_form(partials) == HomogeneousForm({0, 0, 1, 0}));
  const auto p = HomogeneousForm::parse("3:1,0,-3,0");
  CHECK(p == HomogeneousForm({1, 0, -3, 0}));
  CHECK(HomogeneousForm::parse(p.to_string()) == p);
  CHECK_THROWS_AS(HomogeneousForm::parse("3:1,0"), std::invalid_argument);
  CHECK_THROWS_AS(HomogeneousForm::parse("x"), std::invalid_argument);
  CHECK_THROWS_AS(HomogeneousForm({1.0}), std::invalid_argument);
}
