#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "densint/errors.hpp"
#include "densint/harness.hpp"

using namespace densint;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig d = parse_config(Json::object());
  CHECK(d.disc.nodes == 800);
  CHECK(d.orders == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(d.regularize == RegularizeMode::Auto);

  const ExperimentConfig c = parse_config(Json::parse(R"({
    "contour": {"kind": "koch", "koch_level": 2},
    "discretization": {"rule": "fejer", "nodes": 8, "patches": 96},
    "orders": [2, 3],
    "density": {"kind": "meromorphic", "poles": [[3, 0], [0, -3]]},
    "targets": {"kind": "ring", "delta": 1e-5, "count": 20},
    "regularize": "never"
  })"));
  CHECK(c.disc.rule == Rule::Fejer);
  CHECK(c.disc.patches == 96);
  CHECK(c.poles->size() == 2);
  CHECK(c.targets.delta == 1e-5);
  CHECK(c.regularize == RegularizeMode::Never);

  CHECK_THROWS_AS(parse_config(Json::parse(R"({"discretisation": {}})")), ValidationError);
  CHECK_THROWS_AS(parse_config(Json::parse(R"({"targets": {"kind": "ring", "spacing": 2}})")), ValidationError);
  CHECK_THROWS_AS(parse_config(Json::parse(R"({"orders": [0, 9]})")), ValidationError);
  CHECK_THROWS_AS(parse_config(Json::parse(R"({"regularize": "sometimes"})")), ValidationError);
  CHECK_THROWS_AS(parse_config(Json::parse(R"({"density": {"kind": "named", "name": "sin"}})")), ValidationError);
  CHECK_THROWS_AS(parse_config(Json::parse(R"({"targets": {"delta": -1}})")), ValidationError);
}

TEST_CASE("contours from json") {
  CHECK(contour_from_json(Json::parse(R"({"kind": "koch", "koch_level": 1})")).num_patches() == 12);
  const Contour e = contour_from_json(Json::parse(R"({"kind": "ellipse", "params": {"a": 2, "b": 1}})"));
  CHECK(std::abs(e.eval(0.0, 0)[0] - cplx(2.0, 0.0)) < 1e-15);
  CHECK_THROWS_AS(contour_from_json(Json::parse(R"({"kind": "square"})")), ValidationError);
}

TEST_CASE("poles must lie outside the contour") {
  const NodeTable nt = make_nodes(Contour::jellyfish(), Discretization{}, 3);
  CHECK_THROWS_AS(validate_poles(nt, {cplx(0.1, 0.0)}), ValidationError);
  CHECK_NOTHROW(validate_poles(nt, {cplx(3.0, 0.0)}));
  ExperimentConfig c = table1_config(Table1Preset::Jellyfish);
  c.poles = std::vector<cplx>{cplx(0.0, 0.0)};
  CHECK_THROWS_AS(run_table1_study(c), ValidationError);
}

TEST_CASE("preset poles sit a tenth of a diameter outside") {
  for (Table1Preset p : {Table1Preset::Jellyfish, Table1Preset::Snowflake}) {
    const ExperimentConfig c = table1_config(p);
    const NodeTable nt = make_nodes(contour_from_json(c.contour), c.disc, 3);
    CHECK_NOTHROW(validate_poles(nt, table1_poles(p)));
    for (cplx z : table1_poles(p)) {
      const double d = nearest_node(z, nt).distance;
      CHECK(d / nt.diameter == doctest::Approx(0.1).epsilon(0.05));
    }
  }
}

TEST_CASE("ring targets") {
  const NodeTable nt = make_nodes(Contour::jellyfish(), Discretization{Rule::Trapezoid, 400, 0}, 3);
  const TargetSet t = ring_targets(nt, 100, 1e-4);
  REQUIRE(t.points.size() == 100);
  for (std::size_t k = 0; k < 100; ++k) {
    CHECK(classify_point(t.points[k], nt).side == Side::Interior);
    CHECK(nearest_node(t.points[k], nt).distance <= 1e-4 * (1 + 1e-9));
    CHECK(t.anchors[k] == 4 * k);
  }
}

TEST_CASE("constant density has roundoff-level errors") {
  ExperimentConfig c = table1_config(Table1Preset::Jellyfish);
  c.poles.reset();
  c.named = "one";
  c.orders = {0, 3};
  const Table1Result r = run_table1_study(c);
  // the unregularized row is limited by the near-singular quadrature itself
  CHECK(r.rows[0].error[0] > 1.0);
  for (std::size_t i = 1; i < r.rows.size(); ++i) CHECK(r.rows[i].error[0] < 1e-12);
}

TEST_CASE("table rows for the presets") {
  const Table1Result j = run_table1_study(table1_config(Table1Preset::Jellyfish));
  REQUIRE(j.rows.size() == 6);
  CHECK(j.rows[0].order == -1);
  CHECK(j.rows[0].error[0] > 1e-1);
  CHECK(j.rows[4].order == 3);
  CHECK(j.rows[4].error[0] <= 1e-10);
  CHECK(j.rows[4].error[0] >= 1e-14);
  // derivative columns without enough order are not evaluated
  CHECK(std::isnan(j.rows[1].error[1]));
  CHECK(std::isnan(j.rows[3].error[2]));
  CHECK_FALSE(std::isnan(j.rows[4].error[2]));
  const Table1Result s = run_table1_study(table1_config(Table1Preset::Snowflake));
  CHECK(s.rows[0].error[0] > 1.0);
  CHECK(s.rows[4].error[0] < 1e-9);
}

TEST_CASE("errormap far field agrees with and without regularization") {
  const NodeTable nt = make_nodes(Contour::jellyfish(), Discretization{Rule::Trapezoid, 200, 0}, 4);
  const AnalyticDensity f = meromorphic_density(table1_poles(Table1Preset::Jellyfish));
  ErrormapOptions on, off;
  on.nx = on.ny = off.nx = off.ny = 30;
  off.regularize = false;
  const Errormap a = run_errormap(nt, f, on), b = run_errormap(nt, f, off);
  REQUIRE(a.grid.size() == 900);
  CHECK(a.max_log10_error < b.max_log10_error);
  std::size_t same = 0, inside = 0;
  for (std::size_t i = 0; i < a.grid.size(); ++i) {
    CHECK(std::isnan(a.grid[i]) == std::isnan(b.grid[i]));
    if (std::isnan(a.grid[i])) continue;
    ++inside;
    if (a.grid[i] == b.grid[i]) ++same;
  }
  // most of the interior is farther than 5h and takes the identical raw path
  CHECK(same > inside / 2);
}

TEST_CASE("outputs are reproducible byte for byte") {
  const auto dir = std::filesystem::temp_directory_path() / "densint_harness_test";
  std::filesystem::remove_all(dir);
  ExperimentConfig c = table1_config(Table1Preset::Jellyfish);
  c.disc.nodes = 200;
  write_table1_csv(run_table1_study(c), (dir / "a" / "t.csv").string());
  write_table1_csv(run_table1_study(c), (dir / "b" / "t.csv").string());
  const std::string x = slurp(dir / "a" / "t.csv");
  CHECK(!x.empty());
  CHECK(x == slurp(dir / "b" / "t.csv"));

  const NodeTable nt = make_nodes(Contour::jellyfish(), Discretization{Rule::Trapezoid, 100, 0}, 4);
  ErrormapOptions o;
  o.nx = o.ny = 12;
  write_errormap_csv(run_errormap(nt, named_density("exp"), o), (dir / "a" / "e.csv").string());
  write_errormap_csv(run_errormap(nt, named_density("exp"), o), (dir / "b" / "e.csv").string());
  CHECK(slurp(dir / "a" / "e.csv") == slurp(dir / "b" / "e.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("fit helpers") {
  const std::vector<std::size_t> M{100, 200, 400, 800};
  std::vector<double> alg, geo;
  for (std::size_t m : M) {
    alg.push_back(std::pow(static_cast<double>(m), -3.0));
    geo.push_back(std::exp(-0.05 * static_cast<double>(m)));
  }
  CHECK(loglog_slope(M, alg) == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(semilog_sagitta(M, alg, 0.0) > 0.1);
  CHECK(std::abs(semilog_sagitta(M, geo, 0.0)) < 1e-9);
  CHECK(std::isnan(semilog_sagitta(M, geo, 1e-3)));
}

TEST_CASE("manufactured traces") {
  const NodeTable nt = make_nodes(Contour::circle(), Discretization{Rule::Trapezoid, 64, 0}, 3);
  const ManufacturedTraces t = manufactured_traces(nt);
  for (std::size_t m = 0; m < nt.size(); ++m) {
    const cplx z = nt.point()[m];
    CHECK(t.u[m] == doctest::Approx(std::exp(z.real()) * std::sin(z.imag())));
    // grad u = e^x (sin y, cos y), nu = z
    const double dn = std::exp(z.real()) * (std::sin(z.imag()) * z.real() + std::cos(z.imag()) * z.imag());
    CHECK(t.dudn[m] == doctest::Approx(dn).epsilon(1e-13));
    CHECK(t.robin[m] == doctest::Approx(dn + t.u[m]).epsilon(1e-13));
  }
}
