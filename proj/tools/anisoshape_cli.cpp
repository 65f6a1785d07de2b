#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "anisoshape/config.hpp"
#include "anisoshape/corpus.hpp"
#include "anisoshape/meshgen.hpp"
#include "anisoshape/metric.hpp"
#include "anisoshape/shapefn.hpp"
#include "anisoshape/study.hpp"
#include "anisoshape/svg.hpp"

using namespace anisoshape;

namespace {

double parse_p(const std::string& s) {
  if (s == "inf" || s == "infinity") return kInfinity;
  if (s == "1") return 1.0;
  if (s == "2") return 2.0;
  throw std::invalid_argument("--p must be 1, 2 or inf, got '" + s + "'");
}

template <class T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw std::invalid_argument("bad list entry '" + item + "'");
    out.push_back(static_cast<T>(v));
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

// One "x y" vertex per line; '#' starts a comment.
Polygon load_polygon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Point2> pts;
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    std::istringstream ls(line);
    double x = 0.0, y = 0.0;
    if (!(ls >> x)) continue;
    if (!(ls >> y)) throw std::runtime_error("bad polygon line in " + path + ": " + line);
    pts.emplace_back(x, y);
  }
  return Polygon(std::move(pts));
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void print_metric(const SymMetric2& h) {
  std::printf("h11 %.17g\nh12 %.17g\nh22 %.17g\ndet %.17g\n", h.h11, h.h12, h.h22, h.h11 * h.h22 - h.h12 * h.h12);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic shape functions and adapted meshes"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key=value file overriding defaults")->check(CLI::ExistingFile);
  HarnessConfig cfg;
  auto config = [&] {
    if (!config_path.empty()) cfg = load_config(config_path);
  };

  // shape eval
  auto* shape = app.add_subcommand("shape", "Shape function K_{m,p}");
  shape->require_subcommand(1);
  auto* shape_eval = shape->add_subcommand("eval", "Evaluate K_{m,p}(pi)");
  std::string form_text, p_text = "2", method = "closed";
  double cap = NAN;
  shape_eval->add_option("--form", form_text, "form m:a0,...,am")->required();
  shape_eval->add_option("--p", p_text, "1, 2 or inf");
  shape_eval->add_option("--method", method)->check(CLI::IsMember({"oracle", "closed", "ellipse", "invariant"}));
  shape_eval->add_option("--cap", cap, "diameter cap for the oracle");
  shape_eval->callback([&] {
    config();
    const HomogeneousForm pi = HomogeneousForm::parse(form_text);
    const double p = parse_p(p_text);
    if (method == "oracle") {
      ShapeQuery q;
      q.p = p;
      q.cap = std::isnan(cap) ? cfg.cap : cap;
      const ShapeResult r = shape_oracle(pi, q);
      std::printf("%.17g\n", r.value);
      for (const auto& v : r.triangle.v) std::printf("%.17g %.17g\n", v.x(), v.y());
    } else if (method == "closed") {
      std::printf("%.17g\n", shape_closed(pi, p));
    } else if (method == "ellipse") {
      std::printf("%.17g\n", shape_ellipse(pi).value);
    } else {
      std::printf("%.17g\n", pi.degree() == 4 ? invariant_equiv4(pi) : invariant_equiv(pi));
    }
  });

  // metric eval / field
  auto* metric = app.add_subcommand("metric", "Adaptation metrics");
  metric->require_subcommand(1);
  auto* metric_eval = metric->add_subcommand("eval", "Metric of a single form");
  double alpha = 0.0;
  metric_eval->add_option("--form", form_text)->required();
  metric_eval->add_option("--alpha", alpha, "eigenvalue floor");
  metric_eval->callback([&] {
    const HomogeneousForm pi = HomogeneousForm::parse(form_text);
    if (pi.degree() == 2) {
      print_metric(hmatrix2_constrained(pi, alpha));
    } else if (pi.degree() == 3) {
      const ConstrainedMetric c = hmatrix3_constrained_full(pi, alpha);
      print_metric(c.h);
      std::printf("regime %d\nmu %.17g\nalpha_star %.17g\nbeta %.17g\n", c.regime, c.thresholds.mu,
                  c.thresholds.alpha_star, c.thresholds.beta);
    } else {
      throw std::invalid_argument("metric eval needs a quadratic or cubic form");
    }
  });

  auto* metric_field = metric->add_subcommand("field", "Metric field on a grid, as CSV");
  std::string fn, domain_path, out_path;
  int m = 2, grid = 0;
  double nu = 1e-3;
  metric_field->add_option("--fn", fn, "corpus function")->required();
  metric_field->add_option("--domain", domain_path, "polygon file, one 'x y' per line")->check(CLI::ExistingFile);
  metric_field->add_option("--m", m);
  metric_field->add_option("--p", p_text);
  metric_field->add_option("--nu", nu);
  metric_field->add_option("--grid", grid);
  metric_field->add_option("--out", out_path)->required();
  metric_field->callback([&] {
    config();
    const CorpusFunction& f = corpus_function(fn);
    const Polygon domain = domain_path.empty() ? f.domain : load_polygon(domain_path);
    const MetricField field(f.field(m), domain, m, parse_p(p_text), nu);
    auto out = open_out(out_path);
    out << "x,y,h11,h12,h22\n";
    char buf[160];
    for (const Point2& z : domain_grid(domain, grid > 0 ? grid : cfg.metric_grid)) {
      const SymMetric2 h = field(z);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", z.x(), z.y(), h.h11, h.h12, h.h22);
      out << buf;
    }
  });

  // mesh adapt / uniform / check
  auto* mesh = app.add_subcommand("mesh", "Mesh generation");
  mesh->require_subcommand(1);
  auto* mesh_adapt = mesh->add_subcommand("adapt", "Adapted mesh for a corpus function");
  int target = 2000;
  mesh_adapt->add_option("--fn", fn)->required();
  mesh_adapt->add_option("--m", m);
  mesh_adapt->add_option("--p", p_text);
  mesh_adapt->add_option("--N", target, "target triangle count");
  mesh_adapt->add_option("--domain", domain_path)->check(CLI::ExistingFile);
  mesh_adapt->add_option("--out", out_path)->required();
  std::string svg_path;
  mesh_adapt->add_option("--svg", svg_path, "also draw the mesh, boundary triangles shaded");
  mesh_adapt->callback([&] {
    config();
    const CorpusFunction& f = corpus_function(fn);
    const Polygon domain = domain_path.empty() ? f.domain : load_polygon(domain_path);
    AdaptOptions options;
    options.cap = cfg.cap;
    const AdaptResult r = adapt_mesh_full(f.field(m), domain, m, parse_p(p_text), target, options);
    save_mesh(r.mesh, out_path);
    if (!svg_path.empty()) plot_mesh(r.mesh, r.boundary).save(svg_path);
    std::printf("triangles %zu\nboundary %zu\nmacros %zu\nadmissibility %.6g\n", r.mesh.num_triangles(),
                r.boundary_count, r.plan.patches.size(), r.admissibility);
  });

  auto* mesh_uniform = mesh->add_subcommand("uniform", "Uniform mesh");
  int n = 32;
  mesh_uniform->add_option("--n", n, "subdivisions per side");
  mesh_uniform->add_option("--domain", domain_path)->check(CLI::ExistingFile);
  mesh_uniform->add_option("--out", out_path)->required();
  mesh_uniform->callback([&] {
    const Polygon domain = domain_path.empty() ? Polygon::unit_square() : load_polygon(domain_path);
    const Mesh u = uniform_mesh(domain, n);
    save_mesh(u, out_path);
    std::printf("triangles %zu\n", u.num_triangles());
  });

  auto* mesh_check = mesh->add_subcommand("check", "Conformity check");
  std::string in_path;
  mesh_check->add_option("file", in_path)->required()->check(CLI::ExistingFile);
  mesh_check->add_option("--domain", domain_path)->check(CLI::ExistingFile);
  int check_status = 0;
  mesh_check->callback([&] {
    const Mesh mm = load_mesh(in_path);
    Polygon domain;
    if (!domain_path.empty()) domain = load_polygon(domain_path);
    const ConformityReport rep = check_conforming(mm, domain_path.empty() ? nullptr : &domain);
    std::printf("vertices %zu\ntriangles %zu\n", mm.num_vertices(), mm.num_triangles());
    for (const auto& problem : rep.problems) std::printf("problem: %s\n", problem.c_str());
    std::printf("%s\n", rep.ok ? "conforming" : "not conforming");
    check_status = rep.ok ? 0 : 2;
  });

  // study converge
  auto* study = app.add_subcommand("study", "Convergence studies");
  study->require_subcommand(1);
  auto* converge = study->add_subcommand("converge", "N^{m/2} e against the predicted limit");
  std::string strategy = "adapted", n_text = "500,1000,2000,4000";
  converge->add_option("--fn", fn)->required();
  converge->add_option("--m", m);
  converge->add_option("--p", p_text);
  converge->add_option("--strategy", strategy)->check(CLI::IsMember({"adapted", "uniform"}));
  converge->add_option("--N", n_text, "comma separated counts");
  converge->add_option("--out", out_path);
  converge->callback([&] {
    config();
    const CorpusFunction& f = corpus_function(fn);
    StudyOptions options;
    options.cap = cfg.cap;
    options.limit_grid = cfg.limit_grid;
    options.seed = cfg.seed;
    const auto rows = converge_study(f, m, parse_p(p_text), parse_strategy(strategy), parse_list<int>(n_text), options);
    const std::string desc = "fn=" + fn + " m=" + std::to_string(m) + " p=" + p_text + " strategy=" + strategy;
    if (out_path.empty()) {
      write_study_csv(std::cout, rows, cfg.seed, desc);
    } else {
      auto out = open_out(out_path);
      write_study_csv(out, rows, cfg.seed, desc);
    }
  });

  // plot levelset / mesh
  auto* plot = app.add_subcommand("plot", "SVG figures");
  plot->require_subcommand(1);
  auto* plot_level = plot->add_subcommand("levelset", "Level set |pi| = 1 with metric ellipses");
  std::string alphas_text = "0.5,1,2,4";
  plot_level->add_option("--form", form_text)->required();
  plot_level->add_option("--alphas", alphas_text);
  plot_level->add_option("--out", out_path)->required();
  plot_level->callback([&] {
    config();
    plot_levelset(HomogeneousForm::parse(form_text), parse_list<double>(alphas_text), cfg.levelset_grid)
        .save(out_path);
  });

  auto* plot_m = plot->add_subcommand("mesh", "Mesh drawing");
  plot_m->add_option("--in", in_path)->required()->check(CLI::ExistingFile);
  plot_m->add_option("--out", out_path)->required();
  plot_m->callback([&] { plot_mesh(load_mesh(in_path)).save(out_path); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return check_status;
}
