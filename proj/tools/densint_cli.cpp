#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "densint/cauchy.hpp"
#include "densint/conformal.hpp"
#include "densint/errors.hpp"
#include "densint/harness.hpp"
#include "densint/interpolant.hpp"
#include "densint/laplace.hpp"
#include "densint/solver.hpp"

using namespace densint;

namespace {

struct Common {
  std::string config;
  std::string out = "out";
  int order = -1;
  std::size_t nodes = 0;
  std::size_t patches = 0;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "experiment config (JSON)");
  app->add_option("--out", c.out, "output directory");
  app->add_option("--order", c.order, "density interpolation order N");
  app->add_option("--nodes", c.nodes, "M: node count (per patch for Fejer)");
  app->add_option("--patches", c.patches, "P: patch count for Fejer grids");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  if (c.nodes) cfg.disc.nodes = c.nodes;
  if (c.patches) cfg.disc.patches = c.patches;
  if (c.order >= 0) cfg.orders = {c.order};
  if (!c.config.empty() && c.out == "out") return cfg;
  cfg.out_dir = c.out;
  return cfg;
}

std::string path_in(const ExperimentConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

std::vector<cplx> read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read samples " + path);
  std::vector<cplx> v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    double re = 0, im = 0;
    if (!(is >> re)) throw ValidationError("bad sample line: " + line);
    is >> im;
    v.emplace_back(re, im);
  }
  return v;
}

std::vector<cplx> eval_targets(const ExperimentConfig& cfg, const NodeTable& nodes) {
  std::vector<cplx> pts;
  switch (cfg.targets.kind) {
    case TargetKind::Ring: return ring_targets(nodes, cfg.targets.count, cfg.targets.delta).points;
    case TargetKind::Nodes: return nodes.point();
    case TargetKind::Grid: {
      if (!cfg.targets.box) throw ValidationError("grid targets need a box");
      const auto b = *cfg.targets.box;
      if (cfg.targets.nx < 2 || cfg.targets.ny < 2) throw ValidationError("grid needs nx, ny >= 2");
      for (std::size_t j = 0; j < cfg.targets.ny; ++j)
        for (std::size_t i = 0; i < cfg.targets.nx; ++i)
          pts.emplace_back(b[0] + (b[1] - b[0]) * i / (cfg.targets.nx - 1.0),
                           b[2] + (b[3] - b[2]) * j / (cfg.targets.ny - 1.0));
      return pts;
    }
  }
  return pts;
}

const char* side_name(Side s) {
  return s == Side::Interior ? "interior" : s == Side::Exterior ? "exterior" : "on_curve";
}

int cmd_eval(const Common& c) {
  const ExperimentConfig cfg = resolve(c);
  const int N = cfg.orders.empty() ? 3 : cfg.orders.front();
  const Contour contour = contour_from_json(cfg.contour);
  const NodeTable nodes = make_nodes(contour, cfg.disc, N);
  std::vector<cplx> samples;
  if (cfg.samples_file) {
    samples = read_samples(*cfg.samples_file);
    if (samples.size() != nodes.size())
      throw ValidationError("sample count does not match the node count");
  } else if (cfg.poles) {
    validate_poles(nodes, *cfg.poles);
    const AnalyticDensity f = meromorphic_density(*cfg.poles);
    for (cplx z : nodes.point()) samples.push_back(f.eval(z, 0));
  } else {
    const AnalyticDensity f = named_density(cfg.named.value_or("exp"));
    for (cplx z : nodes.point()) samples.push_back(f.eval(z, 0));
  }
  EvalPolicy pol;
  pol.order = N;
  if (cfg.regularize == RegularizeMode::Always) pol.force_regularize = true;
  if (cfg.regularize == RegularizeMode::Never) pol.force_regularize = false;
  validate_policy(pol);

  std::ostringstream os;
  os << "x,y,side,re,im\n" << std::setprecision(17);
  const std::vector<cplx> targets = eval_targets(cfg, nodes);
  if (cfg.op == "cauchy") {
    const DensityField d = DensityField::from_samples(nodes, samples);
    const InterpolantTable table = build_interpolant_table(nodes, d, N);
    for (cplx z : targets) {
      const TargetPoint t = make_target(z, nodes, pol);
      const cplx v = cauchy_eval(nodes, d, table, t, cfg.derivative);
      os << z.real() << ',' << z.imag() << ',' << side_name(t.side.side) << ',' << v.real() << ','
         << v.imag() << '\n';
    }
  } else {
    std::vector<double> re;
    for (cplx s : samples) re.push_back(s.real());
    const LayerDensity layer = make_layer_density(nodes, re, N);
    const BranchCut cut = BranchCut::star_ray(contour.reference_point());
    for (cplx z : targets) {
      const TargetPoint t = make_target(z, nodes, pol);
      const double v = cfg.op == "double_layer" ? double_layer_potential(nodes, layer, t)
                                                : single_layer_potential(nodes, layer, t, cut);
      os << z.real() << ',' << z.imag() << ',' << side_name(t.side.side) << ',' << v << ",0\n";
    }
  }
  const std::string out = path_in(cfg, "eval.csv");
  write_text(out, os.str());
  std::printf("wrote %zu targets to %s\n", targets.size(), out.c_str());
  return 0;
}

void print_table1(const Table1Result& r) {
  std::printf("%-6s %12s %12s %12s\n", "N", "E0", "E1", "E2");
  for (const auto& row : r.rows) {
    std::printf("%-6s", row.order < 0 ? "none" : std::to_string(row.order).c_str());
    for (double e : row.error) {
      if (std::isnan(e)) std::printf(" %12s", "-");
      else std::printf(" %12.3e", e);
    }
    std::printf("\n");
  }
  std::printf("(%.2f s)\n", r.seconds);
}

int cmd_table1(const Common& c, const std::string& preset) {
  ExperimentConfig cfg;
  std::string name = preset;
  if (!c.config.empty()) {
    cfg = resolve(c);
    name = "custom";
  } else {
    if (preset != "jellyfish" && preset != "snowflake")
      throw ValidationError("preset is jellyfish or snowflake");
    cfg = table1_config(preset == "jellyfish" ? Table1Preset::Jellyfish : Table1Preset::Snowflake);
    if (c.nodes) cfg.disc.nodes = c.nodes;
    if (c.patches) cfg.disc.patches = c.patches;
    if (c.order >= 0) cfg.orders = {c.order};
    cfg.out_dir = c.out;
  }
  const Table1Result r = run_table1_study(cfg);
  print_table1(r);
  write_table1_csv(r, path_in(cfg, "table1_" + name + ".csv"));
  return 0;
}

int cmd_errormap(const Common& c, const std::string& field, std::size_t nx, bool raw,
                 const std::vector<double>& deltas) {
  ExperimentConfig cfg = resolve(c);
  if (c.config.empty()) {
    cfg.disc = {Rule::Trapezoid, c.nodes ? c.nodes : 400, 0};
    if (field == "cauchy") cfg.poles = table1_poles(Table1Preset::Jellyfish);
  }
  ErrormapOptions opt;
  opt.order = c.order >= 0 ? c.order : (c.config.empty() || cfg.orders.empty() ? 3 : cfg.orders.back());
  opt.regularize = !raw;
  opt.nx = opt.ny = nx;
  opt.ring_deltas = deltas;
  const Contour contour = contour_from_json(cfg.contour);
  const NodeTable nodes = make_nodes(contour, cfg.disc, opt.order);
  Errormap map;
  if (field == "greens") {
    map = run_greens_errormap(nodes, opt, BranchCut::star_ray(contour.reference_point()));
  } else if (field == "cauchy") {
    AnalyticDensity f;
    if (cfg.poles) {
      validate_poles(nodes, *cfg.poles);
      f = meromorphic_density(*cfg.poles);
    } else {
      f = named_density(cfg.named.value_or("exp"));
    }
    map = run_errormap(nodes, f, opt);
  } else {
    throw ValidationError("field is cauchy or greens");
  }
  write_errormap_csv(map, path_in(cfg, "errormap_" + field + ".csv"));
  Json meta{{"field", field}, {"M", nodes.size()}, {"N", opt.order}, {"regularized", !raw},
            {"max_log10_error", map.max_log10_error}};
  if (!deltas.empty()) meta["max_ring_log10_error"] = map.max_ring_log10_error;
  write_text(path_in(cfg, "errormap_" + field + ".json"), meta.dump(2) + "\n");
  std::printf("max log10 error %.3f\n", map.max_log10_error);
  return 0;
}

int cmd_solve_robin(const Common& c, const std::string& eq) {
  ExperimentConfig cfg = resolve(c);
  if (eq != "single" && eq != "hyper") throw ValidationError("--eq is single or hyper");
  const int N = c.order >= 0 ? c.order : 3;
  const Contour contour = contour_from_json(cfg.contour);
  Discretization disc = cfg.disc;
  if (!c.nodes && c.config.empty()) disc.nodes = 400;
  const NodeTable nodes = make_nodes(contour, disc, N + 1);
  const ManufacturedTraces tr = manufactured_traces(nodes);
  BieProblem p;
  p.nodes = &nodes;
  p.equation = eq == "single" ? Equation::RobinSingle : Equation::RobinHyper;
  p.data = tr.robin;
  p.order = N;
  p.cut = BranchCut::star_ray(contour.reference_point());
  const BieSolution sol = solve(p);
  const std::vector<double>& exact = eq == "single" ? tr.dudn : tr.u;
  std::ostringstream os;
  os << "m,x,y,trace,exact\n" << std::setprecision(17);
  double err = 0, scale = 0;
  for (std::size_t m = 0; m < nodes.size(); ++m) {
    const cplx z = nodes.point()[m];
    os << m << ',' << z.real() << ',' << z.imag() << ',' << sol.trace[m] << ',' << exact[m] << '\n';
    err = std::max(err, std::abs(sol.trace[m] - exact[m]));
    scale = std::max(scale, std::abs(exact[m]));
  }
  write_text(path_in(cfg, "robin_" + eq + ".csv"), os.str());
  Json meta{{"equation", eq}, {"M", nodes.size()}, {"N", N}, {"iterations", sol.iterations},
            {"relative_error", err / scale}};
  write_text(path_in(cfg, "robin_" + eq + ".json"), meta.dump(2) + "\n");
  std::printf("%s: M=%zu N=%d iterations=%zu relative trace error %.3e\n", eq.c_str(), nodes.size(),
              N, sol.iterations, err / scale);
  return 0;
}

int cmd_conformal(const Common& c, const std::string& dir, std::size_t nr, std::size_t na) {
  ExperimentConfig cfg = resolve(c);
  if (dir != "interior" && dir != "exterior")
    throw ValidationError("--direction is interior or exterior");
  const int N = c.order >= 0 ? c.order : 3;
  const Contour contour = contour_from_json(cfg.contour);
  Discretization disc = cfg.disc;
  if (!c.nodes && c.config.empty()) disc.nodes = 400;
  const NodeTable nodes = make_nodes(contour, disc, N);
  const ConformalMap map = ConformalMap::solve(
      nodes, dir == "interior" ? MapDirection::Interior : MapDirection::Exterior, N);
  PolarGrid grid;
  grid.n_radial = nr;
  grid.n_angular = na;
  const auto rows = map_grid(map, grid);
  export_mapped_grid(map, rows, path_in(cfg, "conformal_" + dir + ".csv"),
                     path_in(cfg, "conformal_" + dir + ".json"));
  std::printf("%s map: M=%zu N=%d alpha=%.12g capacity=%.12g, %zu grid points\n", dir.c_str(),
              nodes.size(), N, map.alpha(), map.capacity(), rows.size());
  return 0;
}

int cmd_convergence(const Common& c, const std::string& eq, std::vector<int> orders,
                    std::vector<std::size_t> Ms) {
  ExperimentConfig cfg = resolve(c);
  if (eq != "single" && eq != "hyper") throw ValidationError("--eq is single or hyper");
  ConvergenceOptions opt;
  opt.equation = eq == "single" ? Equation::RobinSingle : Equation::RobinHyper;
  if (c.order >= 0) orders = {c.order};
  if (!orders.empty()) opt.orders = orders;
  else if (eq == "hyper") opt.orders = {1, 2, 3};
  if (!Ms.empty()) opt.nodes = Ms;
  const Contour contour = contour_from_json(cfg.contour);
  const auto series = run_convergence(contour, opt);
  write_convergence_csv(series, path_in(cfg, "convergence_" + eq + ".csv"));
  Json meta = Json::array();
  for (const auto& s : series) {
    std::printf("N=%d slope %.3f sagitta %.3f:", s.order, s.slope, s.sagitta);
    for (std::size_t k = 0; k < s.nodes.size(); ++k)
      std::printf(" %zu:%.2e", s.nodes[k], s.errors[k]);
    std::printf("\n");
    meta.push_back({{"N", s.order}, {"slope", s.slope},
                    {"sagitta", std::isnan(s.sagitta) ? Json(nullptr) : Json(s.sagitta)}});
  }
  write_text(path_in(cfg, "convergence_" + eq + ".json"), meta.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Density interpolation for layer potentials and Cauchy integrals"};
  app.require_subcommand(1);
  Common common;

  auto* eval = app.add_subcommand("eval", "evaluate an operator at configured targets");
  add_common(eval, common);

  std::string preset = "jellyfish";
  auto* table1 = app.add_subcommand("table1", "near-boundary Cauchy error table");
  add_common(table1, common);
  table1->add_option("--preset", preset, "jellyfish or snowflake");

  std::string field = "cauchy";
  std::size_t grid_n = 120;
  bool raw = false;
  std::vector<double> deltas;
  auto* errormap = app.add_subcommand("errormap", "log10 error over an interior grid");
  add_common(errormap, common);
  errormap->add_option("--field", field, "cauchy or greens");
  errormap->add_option("--grid", grid_n, "grid points per axis");
  errormap->add_flag("--no-regularize", raw, "turn the distance rule off");
  errormap->add_option("--ring", deltas, "extra points at these inward offsets");

  std::string eq = "single";
  auto* robin = app.add_subcommand("solve-robin", "solve a Robin problem for u = e^x sin y");
  add_common(robin, common);
  robin->add_option("--eq", eq, "single or hyper");

  std::string direction = "interior";
  std::size_t nr = 20, na = 64;
  auto* conformal = app.add_subcommand("conformal", "solve and export a conformal map");
  add_common(conformal, common);
  conformal->add_option("--direction", direction, "interior or exterior");
  conformal->add_option("--radial", nr, "radial grid lines");
  conformal->add_option("--angular", na, "angular grid lines");

  std::vector<int> orders;
  std::vector<std::size_t> Ms;
  auto* conv = app.add_subcommand("convergence", "trace error against M");
  add_common(conv, common);
  conv->add_option("--eq", eq, "single or hyper");
  conv->add_option("--orders", orders, "interpolation orders");
  conv->add_option("--sweep", Ms, "node counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*eval) return cmd_eval(common);
    if (*table1) return cmd_table1(common, preset);
    if (*errormap) return cmd_errormap(common, field, grid_n, raw, deltas);
    if (*robin) return cmd_solve_robin(common, eq);
    if (*conformal) return cmd_conformal(common, direction, nr, na);
    if (*conv) return cmd_convergence(common, eq, orders, Ms);
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DegenerateParametrizationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResolutionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
