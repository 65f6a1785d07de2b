#pragma once

#include <functional>
#include <vector>

namespace anisoshape {

struct NelderMeadOptions {
  int max_evals = 2000;
  /// Stops when the simplex diameter and the value spread both fall below these.
  double xtol = 1e-9;
  double ftol = 1e-12;
  /// Per-coordinate initial simplex offsets; 0.1 when empty.
  std::vector<double> step;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Derivative-free minimization. Infinite values act as walls.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             const NelderMeadOptions& opts = {});

}  // namespace anisoshape
