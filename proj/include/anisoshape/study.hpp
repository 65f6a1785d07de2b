#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "anisoshape/corpus.hpp"
#include "anisoshape/geometry.hpp"
#include "anisoshape/lagrange.hpp"

namespace anisoshape {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// ||K(d^m f / m!)||_{L^q(domain)}, 1/q = m/2 + 1/p, by the midpoint rule on a
/// grid x grid partition of the bounding box (cells with centers outside the
/// domain are skipped). Uses the closed forms for m = 2, 3 and the shape
/// oracle with diameter cap `cap` otherwise.
double predicted_limit(const ScalarField& f, const Polygon& domain, int m, double p, int grid = 128,
                       double cap = 16.0);

enum class Strategy { adapted, uniform };
Strategy parse_strategy(const std::string& s);
std::string to_string(Strategy s);

struct StudyRow {
  /// Actual triangle count, or the requested count when meshing failed.
  long n = 0;
  double error = 0.0;
  /// N^{m/2} error.
  double scaled = 0.0;
  double predicted = 0.0;
  /// scaled / predicted.
  double ratio = 0.0;
  /// Empty on success.
  std::string failure;
};

struct StudyOptions {
  double cap = 16.0;
  int limit_grid = 128;
  std::uint64_t seed = kDefaultSeed;
};

/// One row per target count; uniform meshes use n = round(sqrt(N / 2)).
/// Mesh generation failures are recorded in the row instead of thrown.
std::vector<StudyRow> converge_study(const CorpusFunction& f, int m, double p, Strategy strategy,
                                     const std::vector<int>& n_list, const StudyOptions& options = {});
/// Same with an explicit field and domain.
std::vector<StudyRow> converge_study(const ScalarField& f, const Polygon& domain, int m, double p, Strategy strategy,
                                     const std::vector<int>& n_list, const StudyOptions& options = {});

/// "# seed=0x5EED" comment, then "N,error,scaled,predicted,ratio" rows in %.17g.
void write_study_csv(std::ostream& os, const std::vector<StudyRow>& rows, std::uint64_t seed = kDefaultSeed,
                     const std::string& description = "");
std::vector<StudyRow> read_study_csv(std::istream& is);

}  // namespace anisoshape
