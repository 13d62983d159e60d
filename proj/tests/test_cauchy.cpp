#include <doctest.h>

#include <cmath>

#include "densint/cauchy.hpp"
#include "densint/contour.hpp"
#include "densint/errors.hpp"
#include "densint/interpolant.hpp"
#include "densint/nodes.hpp"

using namespace densint;

namespace {

struct Setup {
  NodeTable nodes;
  DensityField density;
  InterpolantTable table;
};

Setup make(const Contour& c, std::size_t M, int N, const std::function<cplx(cplx)>& f) {
  NodeTable nt = discretize_trapezoid(c, M, std::max(N, 2) + 1);
  DensityField d = DensityField::from_function(nt, f, 1);
  InterpolantTable t = build_interpolant_table(nt, d, N);
  return {std::move(nt), std::move(d), std::move(t)};
}

cplx regularized(const Setup& s, cplx z, int n = 0) {
  EvalPolicy p;
  p.order = s.table.order();
  p.force_regularize = true;
  return cauchy_regularized(s.nodes, s.density, s.table, make_target(z, s.nodes, p), n);
}

}  // namespace

TEST_CASE("raw Cauchy integral of one") {
  const Setup s = make(Contour::jellyfish(), 400, 3, [](cplx) { return cplx(1.0); });
  CHECK(std::abs(cauchy_raw(s.nodes, s.density, cplx(0.1, 0.2)) - 1.0) < 1e-13);
  CHECK(std::abs(cauchy_raw(s.nodes, s.density, cplx(3.0, -1.0))) < 1e-13);
  CHECK(std::abs(cauchy_raw(s.nodes, s.density, cplx(0.1, 0.2), 2)) < 1e-12);
}

TEST_CASE("raw Cauchy integral reproduces polynomials and their derivatives") {
  const Setup s = make(Contour::circle(), 64, 3, [](cplx z) { return z * z * z; });
  const cplx z(0.3, -0.2);
  CHECK(std::abs(cauchy_raw(s.nodes, s.density, z) - z * z * z) < 1e-14);
  CHECK(std::abs(cauchy_raw(s.nodes, s.density, z, 1) - 3.0 * z * z) < 1e-13);
  CHECK(std::abs(cauchy_raw(s.nodes, s.density, z, 2) - 6.0 * z) < 1e-13);
  CHECK(std::abs(cauchy_raw(s.nodes, s.density, cplx(1.5, 1.0))) < 1e-14);
  CHECK_THROWS_AS(cauchy_raw(s.nodes, s.density, z, -1), OrderError);
}

TEST_CASE("Hilbert transform on the unit circle") {
  {
    const Setup s = make(Contour::circle(), 64, 3, [](cplx) { return cplx(1.0); });
    for (std::size_t m = 0; m < 64; m += 7)
      CHECK(std::abs(hilbert_regularized(s.nodes, s.density, s.table, m) - 1.0) < 1e-13);
  }
  for (int N : {0, 1, 3}) {
    const Setup s = make(Contour::circle(), 64, N, [](cplx z) { return z; });
    for (std::size_t m = 0; m < 64; m += 7)
      CHECK(std::abs(hilbert_regularized(s.nodes, s.density, s.table, m) - s.nodes.point()[m]) < 1e-12);
  }
  for (int N : {0, 2, 3}) {
    const Setup s = make(Contour::circle(), 64, N, [](cplx z) { return std::conj(z); });
    for (std::size_t m = 0; m < 64; m += 7) {
      const cplx z = s.nodes.point()[m];
      CHECK(std::abs(hilbert_regularized(s.nodes, s.density, s.table, m) + std::conj(z)) < 1e-11);
    }
  }
}

TEST_CASE("distance rule") {
  const NodeTable nt = discretize_trapezoid(Contour::circle(), 128, 3);
  const double h = nt.spacing[0];
  const cplx z0 = nt.point()[0];
  EvalPolicy p;
  CHECK(make_target(z0 * (1.0 - h), nt, p).regularize);
  CHECK_FALSE(make_target(z0 * (1.0 + 10.0 * h), nt, p).regularize);
  // strict inequality: exactly 5h is treated as far
  const NearestNode at5 = nearest_node(z0 * (1.0 + 5.0 * h), nt);
  const double d = at5.distance;
  p.distance_factor = d / h;
  CHECK_FALSE(make_target(z0 * (1.0 + 5.0 * h), nt, p).regularize);
  p = EvalPolicy{};
  p.force_regularize = false;
  CHECK_FALSE(make_target(z0 * (1.0 - h), nt, p).regularize);
  CHECK(make_target(z0, nt, p).regularize);
  p = EvalPolicy{};
  p.distance_factor = 0.0;
  CHECK_THROWS_AS(make_target(0.0, nt, p), ValidationError);
  p = EvalPolicy{};
  p.order = -1;
  CHECK_THROWS_AS(make_target(0.0, nt, p), OrderError);
}

TEST_CASE("regularization is exact for polynomial densities") {
  const Setup s = make(Contour::jellyfish(), 200, 3, [](cplx z) { return z * z - 2.0 * z; });
  const cplx z0 = s.nodes.point()[40];
  const cplx nu = s.nodes.normal[40];
  for (double d : {1e-2, 1e-5, 1e-9}) {
    const cplx zi = z0 - d * nu, ze = z0 + d * nu;
    CHECK(std::abs(regularized(s, zi) - (zi * zi - 2.0 * zi)) < 1e-12);
    CHECK(std::abs(regularized(s, ze)) < 1e-12);
    CHECK(std::abs(regularized(s, zi, 1) - (2.0 * zi - 2.0)) < 1e-10);
  }
}

TEST_CASE("raw and regularized agree far from the contour") {
  const Setup s = make(Contour::jellyfish(), 400, 3, [](cplx z) { return std::exp(z); });
  const double h = s.nodes.spacing[100];
  const cplx z0 = s.nodes.point()[100], nu = s.nodes.normal[100];
  for (double k : {8.0, 12.0}) {
    for (cplx z : {z0 - k * h * nu, z0 + k * h * nu}) {
      REQUIRE(nearest_node(z, s.nodes).index == 100);
      CHECK(std::abs(cauchy_raw(s.nodes, s.density, z) - regularized(s, z)) < 1e-11);
      CHECK(std::abs(cauchy_raw(s.nodes, s.density, z, 1) - regularized(s, z, 1)) < 1e-9);
    }
  }
  CHECK(std::abs(regularized(s, cplx(0.1, 0.1)) - std::exp(cplx(0.1, 0.1))) < 1e-11);
}

TEST_CASE("jump across the contour") {
  const Setup s = make(Contour::circle(), 256, 3,
                       [](cplx z) { return 2.0 * std::pow(z.real(), 2) - 1.0 + cplx(0, z.imag()); });
  for (std::size_t m = 0; m < 256; m += 32) {
    const cplx z0 = s.nodes.point()[m];
    const cplx lim = cauchy_boundary_limit(s.nodes, s.density, s.table, m, Side::Interior) -
                     cauchy_boundary_limit(s.nodes, s.density, s.table, m, Side::Exterior);
    CHECK(std::abs(lim - s.density.values[m]) < 1e-14);
    double prev = 1.0;
    for (double h : {1e-2, 1e-3, 1e-4}) {
      const cplx jump = regularized(s, z0 * (1.0 - h)) - regularized(s, z0 * (1.0 + h));
      const double e = std::abs(jump - s.density.values[m]);
      CHECK(e < prev);
      prev = e;
    }
  }
}

TEST_CASE("derivative order limits") {
  const Setup s = make(Contour::circle(), 64, 2, [](cplx z) { return z; });
  CHECK_NOTHROW(regularized(s, cplx(0.5, 0.0), 1));
  CHECK_THROWS_AS(regularized(s, cplx(0.5, 0.0), 2), OrderError);
  CHECK_NOTHROW(regularized(s, cplx(0.5, 0.0), 0));
  CHECK(order_is_recommended(3, 1));
  CHECK_FALSE(order_is_recommended(2, 1));
}

TEST_CASE("targets on a node are singular for the raw rule") {
  const Setup s = make(Contour::circle(), 64, 2, [](cplx z) { return z; });
  CHECK_THROWS_AS(cauchy_raw(s.nodes, s.density, s.nodes.point()[3]), SingularEvaluationError);
  // on-curve principal value
  CHECK(std::abs(regularized(s, s.nodes.point()[3]) - 0.5 * s.nodes.point()[3]) < 1e-13);
  CHECK_THROWS_AS(regularized(s, s.nodes.point()[3], 1), SingularEvaluationError);
}

TEST_CASE("regularized Cauchy integral on the snowflake") {
  const NodeTable nt = discretize_fejer(subdivide_patches(build_koch_polygon(3), 3), 8, 4);
  const DensityField d = DensityField::from_function(nt, [](cplx z) { return 1.0 / (z - 2.0); });
  const InterpolantTable t = build_interpolant_table(nt, d, 3);
  EvalPolicy p;
  for (std::size_t m = 5; m < nt.size(); m += 397) {
    const cplx z = nt.point()[m] - 1e-6 * nt.normal[m];
    const cplx v = cauchy_eval(nt, d, t, make_target(z, nt, p));
    CHECK(std::abs(v - 1.0 / (z - 2.0)) < 1e-9);
  }
}
