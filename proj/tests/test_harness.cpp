#include <cmath>
#include <cstring>
#include <sstream>

#include "anisoshape/config.hpp"
#include "anisoshape/corpus.hpp"
#include "anisoshape/meshgen.hpp"
#include "anisoshape/shapefn.hpp"
#include "anisoshape/study.hpp"
#include "anisoshape/svg.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace anisoshape;
using testing_support::rel;

namespace {

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("corpus derivative callbacks match finite differences") {
  for (const auto& entry : corpus()) {
    for (int m : {2, 3}) {
      const ScalarField f = entry.field(m);
      if (!f.partials || (!entry.analytic && m > 2)) continue;
      const auto [x0, y0, x1, y1] = entry.domain.bbox();
      for (int k = 0; k < 3; ++k) {
        const Point2 z(testing_support::uniform(x0 + 0.1, x1 - 0.1), testing_support::uniform(y0 + 0.1, y1 - 0.1));
        const auto exact = f.partials(z.x(), z.y(), m);
        const auto fd = finite_difference_partials(f.value, z, m, 1e-3);
        double scale = 0.0;
        for (double d : exact) scale = std::max(scale, std::abs(d));
        for (int i = 0; i <= m; ++i) {
          INFO(entry.name, " m=", m, " k=", i);
          CHECK(std::abs(exact[i] - fd[i]) <= 1e-4 * std::max(scale, 1.0));
        }
      }
    }
  }
}

TEST_CASE("corpus lookup") {
  for (const char* name : {"isoquad", "saddle", "hyp", "cubsum", "cubaniso", "saddleaniso", "bump", "degen"}) {
    CHECK(corpus_function(name).name == name);
  }
  CHECK_THROWS_AS(corpus_function("nope"), std::invalid_argument);
  const ScalarField d4 = corpus_function("degen").field(4);
  CHECK(d4(0.5, 0.3) == doctest::Approx(0.0625));
  CHECK(d4.taylor(Point2(0.2, 0.7), 4)[4] == doctest::Approx(1.0));
  const HomogeneousForm cub = corpus_function("cubaniso").field(3).taylor(Point2(0.3, 0.4), 3);
  const std::vector<double> expected{0.2, -3.0, 0.0, 1.0};
  for (int i = 0; i <= 3; ++i) CHECK(cub[i] == doctest::Approx(expected[i]).epsilon(1e-14));
}

TEST_CASE("predicted limits") {
  const double sp = sigma_constant(2, 1, 2.0), sm = sigma_constant(2, -1, 2.0);
  auto limit = [](const char* name, int m) {
    const auto& f = corpus_function(name);
    return predicted_limit(f.field(m), f.domain, m, 2.0);
  };
  CHECK(rel(limit("isoquad", 2), sp) < 1e-12);
  CHECK(rel(limit("saddle", 2), sm) < 1e-12);
  CHECK(rel(limit("hyp", 2), sm * 0.5) < 1e-12);
  CHECK(rel(limit("cubsum", 3), sigma_constant(3, -1, 2.0) * std::pow(27.0, 0.25)) < 1e-12);
  // |Omega| = 4 scales the L^q norm by 4^{1/q} = 8 for q = 2/3.
  const ScalarField iso = corpus_function("isoquad").field(2);
  CHECK(rel(predicted_limit(iso, Polygon::rectangle(0, 0, 2, 2), 2, 2.0), sp * 8.0) < 1e-12);
  CHECK(rel(predicted_limit(iso, Polygon::unit_square(), 2, kInfinity), sigma_constant(2, 1, kInfinity)) < 1e-12);
}

TEST_CASE("convergence study rows") {
  const auto& iso = corpus_function("isoquad");
  const auto rows = converge_study(iso, 2, 2.0, Strategy::adapted, {500, 1000, 2000, 4000});
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK(r.failure.empty());
    CHECK(r.error > 0);
    CHECK(r.scaled == doctest::Approx(r.n * r.error).epsilon(1e-12));
    CHECK(r.ratio == doctest::Approx(r.scaled / r.predicted).epsilon(1e-12));
  }
  CHECK(rows.back().ratio >= 0.8);
  CHECK(rows.back().ratio <= 1.3);
  CHECK_THROWS_AS(converge_study(iso, 2, 2.0, Strategy::adapted, {1000, 500}), std::invalid_argument);

  const auto failed = converge_study(iso, 2, kInfinity, Strategy::adapted, {500});
  CHECK_FALSE(failed[0].failure.empty());
  CHECK(std::isnan(failed[0].ratio));
  const auto uniform = converge_study(iso, 2, kInfinity, Strategy::uniform, {500});
  CHECK(uniform[0].failure.empty());
  CHECK(uniform[0].n == 2 * 16 * 16);
}

TEST_CASE("adaptation beats the uniform mesh on a sign-changing Hessian") {
  const auto& f = corpus_function("saddleaniso");
  const std::vector<int> ns{500, 1000, 2000};
  const auto adapted = converge_study(f, 2, 2.0, Strategy::adapted, ns);
  const auto uniform = converge_study(f, 2, 2.0, Strategy::uniform, ns);
  for (std::size_t i = 0; i < ns.size(); ++i) CHECK(adapted[i].ratio < uniform[i].ratio);
}

TEST_CASE("study CSV round trip") {
  std::vector<StudyRow> rows;
  for (int k = 0; k < 5; ++k) {
    StudyRow r;
    r.n = 100 * (k + 1);
    r.error = std::exp(-testing_support::uniform(0, 20));
    r.scaled = r.error * r.n;
    r.predicted = M_PI / 7;
    r.ratio = r.scaled / r.predicted;
    rows.push_back(r);
  }
  rows[2].error = rows[2].scaled = rows[2].ratio = std::numeric_limits<double>::quiet_NaN();
  rows[2].failure = "mesh failed";
  std::stringstream ss;
  write_study_csv(ss, rows, kDefaultSeed, "fn=test");
  const std::string text = ss.str();
  CHECK(text.rfind("# seed=0x5EED\n", 0) == 0);
  CHECK(text.find("N,error,scaled,predicted,ratio\n") != std::string::npos);
  const auto back = read_study_csv(ss);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].n == rows[i].n);
    CHECK(same_bits(back[i].predicted, rows[i].predicted));
    if (i == 2) {
      CHECK(std::isnan(back[i].error));
      continue;
    }
    CHECK(same_bits(back[i].error, rows[i].error));
    CHECK(same_bits(back[i].scaled, rows[i].scaled));
    CHECK(same_bits(back[i].ratio, rows[i].ratio));
  }
  std::stringstream bad("# x\nN,err\n");
  CHECK_THROWS_AS(read_study_csv(bad), std::runtime_error);
}

TEST_CASE("level-set plots") {
  const std::vector<std::pair<HomogeneousForm, std::vector<double>>> cases{
      {HomogeneousForm::parse("3:0,-3,0,1"), {0.5, 1, 2, 4}},
      {HomogeneousForm::parse("2:-1,0,1"), {0.5, 1, 2}},
      {HomogeneousForm::parse("3:0,0,1,0"), {0.25, 0.5, 1}},
  };
  for (const auto& [pi, alphas] : cases) {
    const std::string a = plot_levelset(pi, alphas, 128).str();
    const std::string b = plot_levelset(pi, alphas, 128).str();
    CHECK(a == b);
    CHECK(a.rfind("<?xml", 0) == 0);
    CHECK(a.find("version=\"1.1\"") != std::string::npos);
    CHECK(a.substr(a.size() - 7) == "</svg>\n");
    CHECK(count(a, "<ellipse") == alphas.size());
    CHECK(count(a, "<path") == 2);
    CHECK(count(a, "M") > 20);
  }
  CHECK_THROWS_AS(plot_levelset(HomogeneousForm::zero(3), {1.0}), std::invalid_argument);
}

TEST_CASE("mesh plots") {
  const Mesh mesh = uniform_mesh(Polygon::unit_square(), 2);
  const std::string svg = plot_mesh(mesh).str();
  CHECK(count(svg, "M") == 16);
  CHECK(svg == plot_mesh(mesh).str());
  std::vector<char> flags(mesh.num_triangles(), 0);
  flags[0] = flags[3] = 1;
  CHECK(count(plot_mesh(mesh, flags).str(), "<polygon") == 2);
  CHECK_THROWS_AS(plot_mesh(mesh, std::vector<char>(3, 0)), std::invalid_argument);
}

TEST_CASE("config files") {
  const auto kv = parse_key_values("# defaults\ncap = 8\n\nseed=0x1234\nlimit_grid=64\n");
  const HarnessConfig c = apply_config({}, kv);
  CHECK(c.cap == 8.0);
  CHECK(c.seed == 0x1234);
  CHECK(c.limit_grid == 64);
  CHECK(c.levelset_grid == 512);
  CHECK_THROWS_AS(apply_config({}, parse_key_values("unknown=1")), std::invalid_argument);
  CHECK_THROWS_AS(apply_config({}, parse_key_values("cap=abc")), std::invalid_argument);
  CHECK_THROWS_AS(parse_key_values("no equals sign"), std::invalid_argument);
  CHECK_THROWS_AS(apply_config({}, parse_key_values("limit_grid=0")), std::invalid_argument);
}
