#include "anisoshape/corpus.hpp"

#include <cmath>
#include <stdexcept>

namespace anisoshape {

namespace {

double falling(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= n - i;
  return r;
}

ScalarField bump_field() {
  ScalarField f;
  f.value = [](double x, double y) { return std::exp(-16 * x * x - y * y); };
  f.partials = [value = f.value](double x, double y, int m) {
    const double e = std::exp(-16 * x * x - y * y);
    if (m == 1) return std::vector<double>{-2 * y * e, -32 * x * e};
    if (m == 2) return std::vector<double>{(4 * y * y - 2) * e, 64 * x * y * e, (1024 * x * x - 32) * e};
    return finite_difference_partials(value, Point2(x, y), m, 2e-3);
  };
  return f;
}

std::vector<CorpusFunction> build() {
  const Polygon unit = Polygon::unit_square();
  auto fixed = [](ScalarField f) { return [f](int) { return f; }; };
  std::vector<CorpusFunction> list;
  list.push_back({"isoquad", "x^2 + y^2", unit, true, fixed(polynomial_field({{1, 2, 0}, {1, 0, 2}}))});
  list.push_back({"saddle", "x^2 - y^2", unit, true, fixed(polynomial_field({{1, 2, 0}, {-1, 0, 2}}))});
  list.push_back({"hyp", "x y", unit, true, fixed(polynomial_field({{1, 1, 1}}))});
  list.push_back({"cubsum", "x^3 + y^3", unit, true, fixed(polynomial_field({{1, 3, 0}, {1, 0, 3}}))});
  list.push_back({"cubaniso", "x^3 - 3 x y^2 + 0.2 y^3", unit, true,
                  fixed(polynomial_field({{1, 3, 0}, {-3, 1, 2}, {0.2, 0, 3}}))});
  // det d^2 f = 120 (x - 1/2) changes sign across the square.
  list.push_back({"saddleaniso", "(x - 0.5)^3 + 10 y^2", unit, true,
                  fixed(polynomial_field({{1, 3, 0}, {-1.5, 2, 0}, {0.75, 1, 0}, {-0.125, 0, 0}, {10, 0, 2}}))});
  list.push_back({"bump", "exp(-(4x)^2 - y^2)", Polygon::rectangle(-1, -1, 1, 1), false, fixed(bump_field())});
  list.push_back({"degen", "x^m", unit, true, [](int m) { return polynomial_field({{1.0, m, 0}}); }});
  return list;
}

}  // namespace

ScalarField polynomial_field(std::vector<Monomial> terms) {
  ScalarField f;
  f.value = [terms](double x, double y) {
    double s = 0.0;
    for (const auto& t : terms) s += t.c * std::pow(x, t.a) * std::pow(y, t.b);
    return s;
  };
  f.partials = [terms](double x, double y, int m) {
    std::vector<double> d(static_cast<std::size_t>(m) + 1, 0.0);
    for (int k = 0; k <= m; ++k) {
      const int l = m - k;
      for (const auto& t : terms) {
        if (t.a < k || t.b < l) continue;
        d[k] += t.c * falling(t.a, k) * falling(t.b, l) * std::pow(x, t.a - k) * std::pow(y, t.b - l);
      }
    }
    return d;
  };
  return f;
}

const std::vector<CorpusFunction>& corpus() {
  static const std::vector<CorpusFunction> list = build();
  return list;
}

const CorpusFunction& corpus_function(const std::string& name) {
  for (const auto& f : corpus())
    if (f.name == name) return f;
  std::string known;
  for (const auto& f : corpus()) known += (known.empty() ? "" : ", ") + f.name;
  throw std::invalid_argument("unknown corpus function '" + name + "' (known: " + known + ")");
}

}  // namespace anisoshape
