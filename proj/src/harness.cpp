#include "densint/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "densint/errors.hpp"
#include "densint/interpolant.hpp"
#include "densint/numerics.hpp"
#include "densint/laplace.hpp"

namespace densint {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

cplx point_from_json(const Json& p, const std::string& what) {
  if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
    throw ValidationError(what + ": expected [x, y]");
  return {p[0].get<double>(), p[1].get<double>()};
}

std::vector<cplx> points_from_json(const Json& a, const std::string& what) {
  if (!a.is_array()) throw ValidationError(what + ": expected a list of [x, y]");
  std::vector<cplx> out;
  for (const auto& p : a) out.push_back(point_from_json(p, what));
  return out;
}

double number(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ValidationError(std::string(key) + " must be a number");
  return j[key].get<double>();
}

std::size_t count(const Json& j, const char* key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer() || j[key].get<long long>() < 0)
    throw ValidationError(std::string(key) + " must be a non-negative integer");
  return j[key].get<std::size_t>();
}

std::string text(const Json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string()) throw ValidationError(std::string(key) + " must be a string");
  return j[key].get<std::string>();
}

void only_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ValidationError("unknown key '" + it.key() + "' in " + where);
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

double log10_error(double e) { return std::log10(std::max(e, 1e-17)); }

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::array<double, 4> node_box(const NodeTable& nodes) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (cplx z : nodes.point()) {
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
  }
  const double pad = 0.02 * std::max(x1 - x0, y1 - y0);
  return {x0 - pad, x1 + pad, y0 - pad, y1 + pad};
}

double axis(double a, double b, std::size_t i, std::size_t n) {
  return n < 2 ? 0.5 * (a + b) : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
}

// Shared grid and ring sweep; `value` returns the absolute error at an
// interior target.
template <class F>
Errormap sweep(const NodeTable& nodes, const ErrormapOptions& opt, F value) {
  if (opt.nx < 2 || opt.ny < 2) throw ValidationError("error map needs nx, ny >= 2");
  EvalPolicy pol;
  pol.order = opt.order;
  if (!opt.regularize) pol.force_regularize = false;
  validate_policy(pol);
  const auto box = node_box(nodes);
  Errormap map;
  for (std::size_t i = 0; i < opt.nx; ++i) map.xs.push_back(axis(box[0], box[1], i, opt.nx));
  for (std::size_t j = 0; j < opt.ny; ++j) map.ys.push_back(axis(box[2], box[3], j, opt.ny));
  map.grid.assign(opt.nx * opt.ny, kNaN);
  for (std::size_t j = 0; j < opt.ny; ++j) {
    for (std::size_t i = 0; i < opt.nx; ++i) {
      const TargetPoint t = make_target({map.xs[i], map.ys[j]}, nodes, pol);
      if (t.side.side != Side::Interior) continue;
      const double e = log10_error(value(t));
      map.grid[j * opt.nx + i] = e;
      map.max_log10_error = std::max(map.max_log10_error, e);
    }
  }
  for (double d : opt.ring_deltas) {
    for (std::size_t m = 0; m < nodes.size(); ++m) {
      const cplx z = nodes.point()[m] - d * nodes.normal[m];
      const TargetPoint t = make_target(z, nodes, pol);
      if (t.side.side != Side::Interior) continue;
      const double e = log10_error(value(t));
      map.ring.push_back({z, e});
      map.max_ring_log10_error = std::max(map.max_ring_log10_error, e);
      map.max_log10_error = std::max(map.max_log10_error, e);
    }
  }
  return map;
}

}  // namespace

Contour contour_from_json(const Json& spec) {
  only_keys(spec, {"kind", "params", "koch_level", "control_points", "label"}, "contour");
  const std::string kind = text(spec, "kind", "");
  const Json params = spec.contains("params") ? spec["params"] : Json::object();
  if (!params.is_object()) throw ValidationError("contour.params must be an object");
  const cplx center = params.contains("center") ? point_from_json(params["center"], "center") : 0.0;
  if (kind == "jellyfish") return Contour::jellyfish();
  if (kind == "circle") return Contour::circle(number(params, "radius", 1.0), center);
  if (kind == "ellipse")
    return Contour::ellipse(number(params, "a", 2.0), number(params, "b", 1.0), center);
  if (kind == "koch") {
    const std::size_t level = count(spec, "koch_level", 3);
    return build_koch_polygon(static_cast<int>(level), number(params, "side", 1.0));
  }
  if (kind == "spline") {
    if (!spec.contains("control_points")) throw ValidationError("spline needs control_points");
    return Contour::spline(points_from_json(spec["control_points"], "control_points"));
  }
  throw ValidationError("unknown contour kind '" + kind + "'");
}

AnalyticDensity meromorphic_density(std::vector<cplx> poles) {
  if (poles.empty()) throw ValidationError("meromorphic density needs at least one pole");
  AnalyticDensity d;
  d.label = "meromorphic";
  d.eval = [poles = std::move(poles)](cplx z, int n) {
    const double c = (n % 2 ? -1.0 : 1.0) * factorial(n);
    cplx s = 0.0;
    for (cplx p : poles) s += c / std::pow(z - p, n + 1);
    return s;
  };
  return d;
}

AnalyticDensity named_density(const std::string& name) {
  AnalyticDensity d;
  d.label = name;
  if (name == "one") {
    d.eval = [](cplx, int n) { return n == 0 ? cplx(1.0) : cplx(0.0); };
  } else if (name == "exp") {
    d.eval = [](cplx z, int) { return std::exp(z); };
  } else if (name == "z2") {
    d.eval = [](cplx z, int n) { return n == 0 ? z * z : n == 1 ? 2.0 * z : n == 2 ? cplx(2.0) : cplx(0.0); };
  } else {
    throw ValidationError("unknown named density '" + name + "'");
  }
  return d;
}

ExperimentConfig parse_config(const Json& j) {
  only_keys(j, {"contour", "discretization", "orders", "operator", "derivative", "density",
                "targets", "regularize", "out"},
            "config");
  ExperimentConfig c;
  if (j.contains("contour")) {
    c.contour = j["contour"];
    (void)contour_from_json(c.contour);
  }
  if (j.contains("discretization")) {
    const Json& d = j["discretization"];
    only_keys(d, {"rule", "nodes", "patches"}, "discretization");
    const std::string rule = text(d, "rule", "trapezoid");
    if (rule == "trapezoid") c.disc.rule = Rule::Trapezoid;
    else if (rule == "fejer") c.disc.rule = Rule::Fejer;
    else throw ValidationError("unknown rule '" + rule + "'");
    c.disc.nodes = count(d, "nodes", c.disc.rule == Rule::Fejer ? 8 : 800);
    c.disc.patches = count(d, "patches", 0);
  }
  if (j.contains("orders")) {
    if (!j["orders"].is_array()) throw ValidationError("orders must be a list");
    c.orders.clear();
    for (const auto& o : j["orders"]) {
      if (!o.is_number_integer() || o.get<int>() < 0 || o.get<int>() > kMaxInterpolationOrder)
        throw ValidationError("orders must be integers in [0, 8]");
      c.orders.push_back(o.get<int>());
    }
  }
  c.op = text(j, "operator", "cauchy");
  if (c.op != "cauchy" && c.op != "double_layer" && c.op != "single_layer")
    throw ValidationError("unknown operator '" + c.op + "'");
  c.derivative = static_cast<int>(count(j, "derivative", 0));
  if (c.derivative > 2) throw ValidationError("derivative must be 0, 1 or 2");
  if (j.contains("density")) {
    const Json& d = j["density"];
    only_keys(d, {"kind", "poles", "name", "file"}, "density");
    const std::string kind = text(d, "kind", "");
    if (kind == "meromorphic") {
      if (!d.contains("poles")) throw ValidationError("meromorphic density needs poles");
      c.poles = points_from_json(d["poles"], "poles");
      if (c.poles->empty()) throw ValidationError("pole list is empty");
    } else if (kind == "named") {
      c.named = text(d, "name", "");
      (void)named_density(*c.named);
    } else if (kind == "samples") {
      c.samples_file = text(d, "file", "");
      if (c.samples_file->empty()) throw ValidationError("samples density needs a file");
    } else {
      throw ValidationError("unknown density kind '" + kind + "'");
    }
  }
  if (j.contains("targets")) {
    const Json& t = j["targets"];
    only_keys(t, {"kind", "delta", "count", "nx", "ny", "box"}, "targets");
    const std::string kind = text(t, "kind", "ring");
    if (kind == "ring") c.targets.kind = TargetKind::Ring;
    else if (kind == "grid") c.targets.kind = TargetKind::Grid;
    else if (kind == "nodes") c.targets.kind = TargetKind::Nodes;
    else throw ValidationError("unknown target kind '" + kind + "'");
    c.targets.delta = number(t, "delta", 1e-4);
    if (!(c.targets.delta > 0)) throw ValidationError("targets.delta must be positive");
    c.targets.count = count(t, "count", 100);
    c.targets.nx = count(t, "nx", 100);
    c.targets.ny = count(t, "ny", 100);
    if (t.contains("box")) {
      const Json& b = t["box"];
      if (!b.is_array() || b.size() != 4) throw ValidationError("targets.box is [x0, x1, y0, y1]");
      std::array<double, 4> box{};
      for (int k = 0; k < 4; ++k) {
        if (!b[k].is_number()) throw ValidationError("targets.box entries must be numbers");
        box[k] = b[k].get<double>();
      }
      c.targets.box = box;
    }
  }
  const std::string reg = text(j, "regularize", "auto");
  if (reg == "auto") c.regularize = RegularizeMode::Auto;
  else if (reg == "always") c.regularize = RegularizeMode::Always;
  else if (reg == "never") c.regularize = RegularizeMode::Never;
  else throw ValidationError("regularize is auto, always or never");
  c.out_dir = text(j, "out", ".");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config " + path + ": " + e.what());
  }
  return parse_config(j);
}

NodeTable make_nodes(const Contour& contour, const Discretization& disc, int order) {
  const int cols = std::max(order, 2);
  if (disc.rule == Rule::Trapezoid) {
    if (!contour.has_global_parametrization())
      throw ValidationError("the trapezoid rule needs a globally parametrized contour");
    return discretize_trapezoid(contour, disc.nodes, cols);
  }
  if (contour.has_global_parametrization()) {
    const std::size_t P = disc.patches ? disc.patches : 16;
    return discretize_fejer(contour.as_patch_collection(P), disc.nodes, cols);
  }
  if (disc.patches == 0) return discretize_fejer(contour, disc.nodes, cols);
  const std::size_t base = contour.num_patches();
  if (disc.patches % base != 0)
    throw ValidationError("patches must be a multiple of the contour's " + std::to_string(base) +
                          " pieces");
  return discretize_fejer(subdivide_patches(contour, disc.patches / base), disc.nodes, cols);
}

void validate_poles(const NodeTable& nodes, const std::vector<cplx>& poles) {
  for (cplx p : poles) {
    const SideClass s = classify_point(p, nodes);
    if (s.side != Side::Exterior) {
      std::ostringstream os;
      os << "pole (" << p.real() << ", " << p.imag() << ") is not outside the contour";
      throw ValidationError(os.str());
    }
  }
}

std::vector<cplx> table1_poles(Table1Preset preset) {
  if (preset == Table1Preset::Jellyfish)
    return {{0.0, -1.56}, {1.40777, -0.67205}, {0.0, 1.56}, {-1.40777, -0.67205}};
  return {{0.0, 0.6928}, {-0.6, 0.3464}, {-0.6, -0.3464},
          {0.0, -0.6928}, {0.6, -0.3464}, {0.6, 0.3464}};
}

ExperimentConfig table1_config(Table1Preset preset) {
  ExperimentConfig c;
  if (preset == Table1Preset::Jellyfish) {
    c.contour = Json{{"kind", "jellyfish"}};
    c.disc = {Rule::Trapezoid, 800, 0};
  } else {
    c.contour = Json{{"kind", "koch"}, {"koch_level", 3}};
    c.disc = {Rule::Fejer, 8, 576};
  }
  c.orders = {0, 1, 2, 3, 4};
  c.poles = table1_poles(preset);
  c.targets = TargetSpec{};
  return c;
}

TargetSet ring_targets(const NodeTable& nodes, std::size_t n, double delta) {
  if (n == 0) throw ValidationError("ring needs at least one target");
  TargetSet set;
  const std::size_t M = nodes.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t m;
    if (nodes.rule == Rule::Trapezoid) {
      m = static_cast<std::size_t>(std::llround(static_cast<double>(k * M) / n)) % M;
    } else {
      const std::size_t P = nodes.num_patches, q = nodes.nodes_per_patch;
      const std::size_t p =
          static_cast<std::size_t>(std::llround(static_cast<double>(k * P) / n)) % P;
      m = p * q + q / 2;
    }
    const double d = delta * std::pow(10.0, -0.5 * static_cast<double>(k % 3));
    set.points.push_back(nodes.point()[m] - d * nodes.normal[m]);
    set.anchors.push_back(m);
  }
  return set;
}

Table1Result run_table1_study(const ExperimentConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!config.poles && !config.named)
    throw ValidationError("the Table 1 study needs an analytic density");
  const int max_order = *std::max_element(config.orders.begin(), config.orders.end());
  const Contour contour = contour_from_json(config.contour);
  const NodeTable nodes = make_nodes(contour, config.disc, max_order);
  AnalyticDensity f;
  if (config.poles) {
    validate_poles(nodes, *config.poles);
    f = meromorphic_density(*config.poles);
  } else {
    f = named_density(*config.named);
  }
  const DensityField density = DensityField::from_function(nodes, [&](cplx z) { return f.eval(z, 0); });
  const TargetSet targets = ring_targets(nodes, config.targets.count, config.targets.delta);

  Table1Result result;
  std::vector<int> rows{-1};
  rows.insert(rows.end(), config.orders.begin(), config.orders.end());
  for (int N : rows) {
    const int order = std::max(N, 0);
    const InterpolantTable table = build_interpolant_table(nodes, density, order);
    EvalPolicy pol;
    pol.order = order;
    pol.force_regularize = N >= 0;
    Table1Row row;
    row.order = N;
    for (int n = 0; n < 3; ++n) {
      if (N >= 0 && n > 0 && n >= N) {
        row.error[n] = kNaN;
        continue;
      }
      double e = 0.0;
      for (cplx w : targets.points) {
        const TargetPoint t = make_target(w, nodes, pol);
        const cplx exact = f.eval(w, n);
        e = std::max(e, std::abs(cauchy_eval(nodes, density, table, t, n) - exact) / std::abs(exact));
      }
      row.error[n] = e;
    }
    result.rows.push_back(row);
  }
  result.seconds = elapsed(t0);
  return result;
}

void write_text(const std::string& path, const std::string& body) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << body;
}

void write_table1_csv(const Table1Result& result, const std::string& path) {
  std::ostringstream os;
  os << "order,E0,E1,E2\n" << std::setprecision(6) << std::scientific;
  for (const auto& r : result.rows) {
    os << (r.order < 0 ? std::string("none") : std::to_string(r.order));
    for (double e : r.error) {
      os << ',';
      if (std::isnan(e)) os << "nan";
      else os << e;
    }
    os << '\n';
  }
  write_text(path, os.str());
}

Errormap run_errormap(const NodeTable& nodes, const AnalyticDensity& f,
                      const ErrormapOptions& opt) {
  const DensityField density = DensityField::from_function(nodes, [&](cplx z) { return f.eval(z, 0); });
  const InterpolantTable table = build_interpolant_table(nodes, density, opt.order);
  return sweep(nodes, opt, [&](const TargetPoint& t) {
    return std::abs(cauchy_eval(nodes, density, table, t, 0) - f.eval(t.z, 0));
  });
}

double manufactured_u(cplx z) { return std::exp(z.real()) * std::sin(z.imag()); }

ManufacturedTraces manufactured_traces(const NodeTable& nodes) {
  ManufacturedTraces tr;
  for (std::size_t m = 0; m < nodes.size(); ++m) {
    const cplx z = nodes.point()[m];
    const double ex = std::exp(z.real());
    const double ux = ex * std::sin(z.imag()), uy = ex * std::cos(z.imag());
    const double dn = ux * nodes.normal[m].real() + uy * nodes.normal[m].imag();
    tr.u.push_back(ux);
    tr.dudn.push_back(dn);
    tr.robin.push_back(dn + ux);
  }
  return tr;
}

Errormap run_greens_errormap(const NodeTable& nodes, const ErrormapOptions& opt,
                             const BranchCut& cut) {
  const ManufacturedTraces tr = manufactured_traces(nodes);
  const LayerDensity u = make_layer_density(nodes, tr.u, opt.order);
  const LayerDensity v = make_layer_density(nodes, tr.dudn, opt.order);
  return sweep(nodes, opt, [&](const TargetPoint& t) {
    return std::abs(greens_field(nodes, u, v, t, cut) - manufactured_u(t.z));
  });
}

void write_errormap_csv(const Errormap& map, const std::string& path) {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "y\\x";
  for (double x : map.xs) os << ',' << x;
  os << '\n';
  const std::size_t nx = map.xs.size();
  for (std::size_t j = 0; j < map.ys.size(); ++j) {
    os << map.ys[j];
    for (std::size_t i = 0; i < nx; ++i) {
      const double e = map.grid[j * nx + i];
      os << ',';
      if (std::isnan(e)) os << "nan";
      else os << e;
    }
    os << '\n';
  }
  write_text(path, os.str());
}

double loglog_slope(const std::vector<std::size_t>& M, const std::vector<double>& err) {
  if (M.size() != err.size() || M.size() < 2) throw ValidationError("slope needs two or more points");
  const std::size_t n = M.size();
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    sx += std::log(static_cast<double>(M[k]));
    sy += std::log(err[k]);
  }
  sx /= n;
  sy /= n;
  double num = 0, den = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = std::log(static_cast<double>(M[k])) - sx;
    num += dx * (std::log(err[k]) - sy);
    den += dx * dx;
  }
  return num / den;
}

double semilog_sagitta(const std::vector<std::size_t>& M, const std::vector<double>& err,
                       double floor) {
  std::vector<double> x, y;
  for (std::size_t k = 0; k < M.size() && k < err.size(); ++k) {
    if (err[k] > floor) {
      x.push_back(static_cast<double>(M[k]));
      y.push_back(std::log10(err[k]));
    }
  }
  if (x.size() < 3) return kNaN;
  // Normal equations in the centred, scaled variable keep this well posed.
  const double lo = x.front(), hi = x.back(), mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double A[3][4] = {};
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double s = (x[k] - mid) / half;
    const double p[3] = {1.0, s, s * s};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) A[r][c] += p[r] * p[c];
      A[r][3] += p[r] * y[k];
    }
  }
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      const double f = A[r][c] / A[c][c];
      for (int k = c; k < 4; ++k) A[r][k] -= f * A[c][k];
    }
  }
  // y = a + b s + c s^2 with s in [-1, 1]: chord minus curve at s = 0 is c.
  return A[2][3] / A[2][2];
}

std::vector<ConvergenceSeries> run_convergence(const Contour& contour,
                                               const ConvergenceOptions& opt) {
  if (!contour.has_global_parametrization())
    throw ValidationError("convergence studies use the trapezoid rule");
  if (opt.nodes.size() < 2) throw ValidationError("convergence needs two or more node counts");
  std::vector<ConvergenceSeries> out;
  for (int N : opt.orders) {
    ConvergenceSeries s;
    s.order = N;
    for (std::size_t M : opt.nodes) {
      const NodeTable nodes = discretize_trapezoid(contour, M, std::max(N, 2) + 1);
      const ManufacturedTraces tr = manufactured_traces(nodes);
      BieProblem p;
      p.nodes = &nodes;
      p.equation = opt.equation;
      p.data = tr.robin;
      p.order = N;
      p.gmres = opt.gmres;
      p.cut = BranchCut::star_ray(contour.reference_point());
      const BieSolution sol = solve(p);
      const std::vector<double>& exact = opt.equation == Equation::RobinHyper ? tr.u : tr.dudn;
      double e = 0.0, scale = 0.0;
      for (std::size_t m = 0; m < M; ++m) {
        e = std::max(e, std::abs(sol.trace[m] - exact[m]));
        scale = std::max(scale, std::abs(exact[m]));
      }
      s.nodes.push_back(M);
      s.errors.push_back(e / scale);
      s.iterations.push_back(sol.iterations);
    }
    s.slope = loglog_slope(s.nodes, s.errors);
    s.sagitta = semilog_sagitta(s.nodes, s.errors, 1e-11);
    out.push_back(std::move(s));
  }
  return out;
}

void write_convergence_csv(const std::vector<ConvergenceSeries>& series, const std::string& path) {
  std::ostringstream os;
  os << "order,M,error,iterations\n" << std::setprecision(6) << std::scientific;
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.nodes.size(); ++k)
      os << s.order << ',' << s.nodes[k] << ',' << s.errors[k] << ',' << s.iterations[k] << '\n';
  write_text(path, os.str());
}

}  // namespace densint
