#pragma once

#include <string>
#include <vector>

#include "anisoshape/geometry.hpp"
#include "anisoshape/lagrange.hpp"

namespace anisoshape {

/// Named test function with its default domain.
struct CorpusFunction {
  std::string name;
  std::string formula;
  Polygon domain;
  /// True when field(m).partials is exact for every m; false when some
  /// orders fall back to finite differences.
  bool analytic = true;
  /// Field used for derivatives of order m (only "degen" depends on m).
  std::function<ScalarField(int m)> field;
};

/// isoquad, saddle, hyp, cubsum, cubaniso, saddleaniso, bump, degen.
const std::vector<CorpusFunction>& corpus();

/// Throws std::invalid_argument for unknown names.
const CorpusFunction& corpus_function(const std::string& name);

/// Polynomial sum_k c_k x^{a_k} y^{b_k} with exact partials of every order.
struct Monomial {
  double c;
  int a;
  int b;
};
ScalarField polynomial_field(std::vector<Monomial> terms);

}  // namespace anisoshape
