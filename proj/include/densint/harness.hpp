#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "densint/cauchy.hpp"
#include "densint/contour.hpp"
#include "densint/nodes.hpp"
#include "densint/solver.hpp"

namespace densint {

using Json = nlohmann::json;

// {"kind": "jellyfish" | "circle" | "ellipse" | "koch" | "spline",
//  "params": {...}, "koch_level": int, "control_points": [[x, y], ...]}
Contour contour_from_json(const Json& spec);

struct Discretization {
  Rule rule = Rule::Trapezoid;
  std::size_t nodes = 800;    // M: total (trapezoid) or per patch (Fejer)
  std::size_t patches = 0;    // P for Fejer; 0 keeps the contour's own patches
};

// f and its complex derivatives, used as the exact reference.
struct AnalyticDensity {
  std::string label;
  std::function<cplx(cplx, int)> eval;  // (z, n) -> f^(n)(z)
};

// sum_l 1 / (z - z_l).
AnalyticDensity meromorphic_density(std::vector<cplx> poles);
// "one", "exp", "z2".
AnalyticDensity named_density(const std::string& name);

enum class TargetKind { Ring, Grid, Nodes };
struct TargetSpec {
  TargetKind kind = TargetKind::Ring;
  double delta = 1e-4;
  std::size_t count = 100;
  std::size_t nx = 100, ny = 100;
  std::optional<std::array<double, 4>> box;  // x0, x1, y0, y1
};

enum class RegularizeMode { Auto, Always, Never };

struct ExperimentConfig {
  Json contour = Json{{"kind", "jellyfish"}};
  Discretization disc;
  std::vector<int> orders{0, 1, 2, 3, 4};
  // "cauchy" (with "derivative" 0..2), "double_layer", "single_layer".
  std::string op = "cauchy";
  int derivative = 0;
  std::optional<std::vector<cplx>> poles;
  std::optional<std::string> named;
  std::optional<std::string> samples_file;
  TargetSpec targets;
  RegularizeMode regularize = RegularizeMode::Auto;
  std::string out_dir = ".";
};

// Validates against the schema documented in the README. Throws
// ValidationError with the offending key.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::string& path);

NodeTable make_nodes(const Contour& contour, const Discretization& disc, int order);

// Every pole must lie strictly outside the contour.
void validate_poles(const NodeTable& nodes, const std::vector<cplx>& poles);

// Table 1 setups. Poles sit 0.1 diameter outside the contour along the
// outward normal at the jellyfish's four lobe tips and beyond the six
// spike tips of the snowflake.
enum class Table1Preset { Jellyfish, Snowflake };
std::vector<cplx> table1_poles(Table1Preset preset);
ExperimentConfig table1_config(Table1Preset preset);

struct TargetSet {
  std::vector<cplx> points;
  std::vector<std::size_t> anchors;  // node each ring point was offset from
};

// Ring: `count` nodes spread evenly along the contour (for Fejer grids one
// node near the middle of every selected patch), each moved inward by
// delta_k = delta * 10^(-(k mod 3) / 2).
TargetSet ring_targets(const NodeTable& nodes, std::size_t count, double delta);

struct Table1Row {
  int order = -1;                // -1: no regularization
  std::array<double, 3> error{};  // E_0, E_1, E_2; NaN where n >= N
};

struct Table1Result {
  std::vector<Table1Row> rows;
  double seconds = 0.0;
};

Table1Result run_table1_study(const ExperimentConfig& config);
void write_table1_csv(const Table1Result& result, const std::string& path);

struct ErrormapOptions {
  int order = 3;
  bool regularize = true;  // false disables the distance rule entirely
  std::size_t nx = 120, ny = 120;
  // Inward offsets of extra near-boundary points at every node.
  std::vector<double> ring_deltas;
};

struct ErrormapPoint {
  cplx z;
  double log10_error;
};

struct Errormap {
  std::vector<double> xs, ys;
  std::vector<double> grid;  // ny x nx row-major, NaN outside
  std::vector<ErrormapPoint> ring;
  double max_log10_error = -999.0;
  double max_ring_log10_error = -999.0;
};

// Cauchy operator of an analytic density.
Errormap run_errormap(const NodeTable& nodes, const AnalyticDensity& density,
                      const ErrormapOptions& options);
// Green's representation of u = e^x sin y from its exact traces.
Errormap run_greens_errormap(const NodeTable& nodes, const ErrormapOptions& options,
                             const BranchCut& cut);
void write_errormap_csv(const Errormap& map, const std::string& path);

// u = e^x sin y: values, Neumann trace and Robin data at the nodes.
struct ManufacturedTraces {
  std::vector<double> u, dudn, robin;
};
ManufacturedTraces manufactured_traces(const NodeTable& nodes);
double manufactured_u(cplx z);

struct ConvergenceSeries {
  int order = 0;
  std::vector<std::size_t> nodes;
  std::vector<double> errors;  // relative max trace error
  std::vector<std::size_t> iterations;
  double slope = 0.0;    // least-squares d log(err) / d log(M)
  double sagitta = 0.0;  // see semilog_sagitta
};

struct ConvergenceOptions {
  Equation equation = Equation::RobinSingle;
  std::vector<int> orders{0, 1, 2, 3};
  std::vector<std::size_t> nodes{100, 200, 400, 800};
  GmresOptions gmres;
};

std::vector<ConvergenceSeries> run_convergence(const Contour& contour,
                                               const ConvergenceOptions& options);
void write_convergence_csv(const std::vector<ConvergenceSeries>& series,
                           const std::string& path);

double loglog_slope(const std::vector<std::size_t>& M, const std::vector<double>& err);
// Quadratic least-squares fit of log10(err) against M over the points with
// err > floor; returns c L^2 / 4 for the leading coefficient c over the span
// L, i.e. how far the chord sits above the curve at mid-span. Positive is
// convex-up (algebraic decay); zero or negative is the exponential
// signature. NaN with fewer than three points.
double semilog_sagitta(const std::vector<std::size_t>& M, const std::vector<double>& err,
                       double floor);

// Writes `text` to `path`, creating parent directories.
void write_text(const std::string& path, const std::string& text);

}  // namespace densint
