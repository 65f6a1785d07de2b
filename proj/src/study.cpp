#include "anisoshape/study.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "anisoshape/meshgen.hpp"
#include "anisoshape/parallel.hpp"
#include "anisoshape/shapefn.hpp"

namespace anisoshape {

double predicted_limit(const ScalarField& f, const Polygon& domain, int m, double p, int grid, double cap) {
  if (m < 2) throw std::invalid_argument("predicted_limit requires m >= 2");
  if (grid < 1) throw std::invalid_argument("predicted_limit grid must be positive");
  const double q = 1.0 / (m / 2.0 + (std::isinf(p) ? 0.0 : 1.0 / p));
  const auto [x0, y0, x1, y1] = domain.bbox();
  const double hx = (x1 - x0) / grid, hy = (y1 - y0) / grid;
  const double fd_step = 1e-3 * domain.diameter();
  std::vector<double> rows(static_cast<std::size_t>(grid), 0.0);
  parallel_for(rows.size(), [&](std::size_t j) {
    ShapeQuery query;
    query.p = p;
    query.cap = cap;
    double acc = 0.0;
    for (int i = 0; i < grid; ++i) {
      const Point2 z(x0 + (i + 0.5) * hx, y0 + (static_cast<double>(j) + 0.5) * hy);
      if (!domain.contains(z)) continue;
      const HomogeneousForm pi = f.taylor(z, m, fd_step);
      if (pi.is_zero()) continue;
      const double k = m <= 3 ? shape_closed(pi, p) : shape_oracle(pi, query).value;
      acc += std::pow(k, q);
    }
    rows[j] = acc;
  });
  double sum = 0.0;
  for (double r : rows) sum += r;
  return std::pow(sum * hx * hy, 1.0 / q);
}

Strategy parse_strategy(const std::string& s) {
  if (s == "adapted") return Strategy::adapted;
  if (s == "uniform") return Strategy::uniform;
  throw std::invalid_argument("strategy must be 'adapted' or 'uniform', got '" + s + "'");
}

std::string to_string(Strategy s) { return s == Strategy::adapted ? "adapted" : "uniform"; }

std::vector<StudyRow> converge_study(const CorpusFunction& f, int m, double p, Strategy strategy,
                                     const std::vector<int>& n_list, const StudyOptions& options) {
  return converge_study(f.field(m), f.domain, m, p, strategy, n_list, options);
}

std::vector<StudyRow> converge_study(const ScalarField& f, const Polygon& domain, int m, double p, Strategy strategy,
                                     const std::vector<int>& n_list, const StudyOptions& options) {
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    if (n_list[i] <= n_list[i - 1]) throw std::invalid_argument("study counts must be increasing");
  }
  const double predicted = predicted_limit(f, domain, m, p, options.limit_grid, options.cap);
  std::vector<StudyRow> rows;
  for (int target : n_list) {
    StudyRow row;
    row.n = target;
    row.predicted = predicted;
    try {
      const Mesh mesh = strategy == Strategy::adapted
                            ? adapt_mesh(f, domain, m, p, target, options.cap)
                            : uniform_mesh(domain, std::max(1, static_cast<int>(std::lround(std::sqrt(target / 2.0)))));
      row.n = static_cast<long>(mesh.num_triangles());
      row.error = global_error(f, mesh, m, p);
      row.scaled = std::pow(static_cast<double>(row.n), m / 2.0) * row.error;
      row.ratio = row.scaled / predicted;
    } catch (const std::exception& e) {
      row.error = row.scaled = row.ratio = std::numeric_limits<double>::quiet_NaN();
      row.failure = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

void write_study_csv(std::ostream& os, const std::vector<StudyRow>& rows, std::uint64_t seed,
                     const std::string& description) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "# seed=0x%llX\n", static_cast<unsigned long long>(seed));
  os << buf;
  if (!description.empty()) os << "# " << description << "\n";
  for (const auto& r : rows)
    if (!r.failure.empty()) os << "# failed N=" << r.n << ": " << r.failure << "\n";
  os << "N,error,scaled,predicted,ratio\n";
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g,%.17g\n", r.n, r.error, r.scaled, r.predicted, r.ratio);
    os << buf;
  }
}

std::vector<StudyRow> read_study_csv(std::istream& is) {
  std::vector<StudyRow> rows;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "N,error,scaled,predicted,ratio") throw std::runtime_error("unexpected study header: " + line);
      header = true;
      continue;
    }
    std::istringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw std::runtime_error("malformed study row: " + line);
    StudyRow r;
    r.n = std::stol(cells[0]);
    double* fields[] = {&r.error, &r.scaled, &r.predicted, &r.ratio};
    for (int k = 0; k < 4; ++k) *fields[k] = std::strtod(cells[k + 1].c_str(), nullptr);
    rows.push_back(r);
  }
  if (!header) throw std::runtime_error("study file has no header");
  return rows;
}

}  // namespace anisoshape
