#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "densint/conformal.hpp"
#include "densint/contour.hpp"
#include "densint/errors.hpp"

using namespace densint;

TEST_CASE("unit circle maps are the identity") {
  const NodeTable nt = discretize_trapezoid(Contour::circle(), 128, 4);
  const ConformalMap fi = ConformalMap::solve(nt, MapDirection::Interior, 3);
  const ConformalMap fe = ConformalMap::solve(nt, MapDirection::Exterior, 3);
  CHECK(fe.capacity() == doctest::Approx(1.0).epsilon(1e-13));
  for (std::size_t m = 0; m < nt.size(); m += 5) {
    const cplx z0 = nt.point()[m];
    CHECK(std::abs(fi(z0) - z0) < 1e-12);
    CHECK(std::abs(fe(z0) - z0) < 1e-12);
    for (double d : {1e-6, 1e-2, 0.5}) {
      CHECK(std::abs(fi(z0 * (1.0 - d)) - z0 * (1.0 - d)) < 1e-12);
      CHECK(std::abs(fe(z0 * (1.0 + d)) - z0 * (1.0 + d)) < 1e-12);
    }
  }
  CHECK(std::abs(fi(0.0)) < 1e-15);
}

TEST_CASE("circle of radius R") {
  const double R = 1.7;
  const NodeTable nt = discretize_trapezoid(Contour::circle(R), 128, 4);
  const ConformalMap fi = ConformalMap::solve(nt, MapDirection::Interior, 3);
  const ConformalMap fe = ConformalMap::solve(nt, MapDirection::Exterior, 3);
  CHECK(fe.capacity() == doctest::Approx(R).epsilon(1e-12));
  for (cplx z : {cplx(0.3, 0.2), cplx(-1.0, 0.5)}) CHECK(std::abs(fi(z) - z / R) < 1e-12);
  for (cplx z : {cplx(2.0, 0.2), cplx(-3.0, 4.5)}) CHECK(std::abs(fe(z) - z / R) < 1e-12);
}

TEST_CASE("ellipse capacity") {
  const NodeTable nt = discretize_trapezoid(Contour::ellipse(2.0, 1.0), 256, 4);
  const ConformalMap fe = ConformalMap::solve(nt, MapDirection::Exterior, 3);
  CHECK(std::abs(fe.capacity() - 1.5) < 1e-7);
  // Joukowski inverse: f_e(z) = (z + sqrt(z^2 - 3)) / 3
  for (cplx z : {cplx(3.0, 1.0), cplx(-2.5, -2.0), cplx(0.0, 1.5)}) {
    const cplx w = z + std::sqrt(z - std::sqrt(3.0)) * std::sqrt(z + std::sqrt(3.0));
    CHECK(std::abs(fe(z) - w / 3.0) < 1e-9);
  }
}

TEST_CASE("jellyfish boundary modulus and normalization") {
  const NodeTable nt = discretize_trapezoid(Contour::jellyfish(), 400, 4);
  const ConformalMap fi = ConformalMap::solve(nt, MapDirection::Interior, 3);
  const ConformalMap fe = ConformalMap::solve(nt, MapDirection::Exterior, 3);
  for (std::size_t m = 0; m < nt.size(); m += 3) {
    CHECK(std::abs(std::abs(fi(nt.point()[m])) - 1.0) < 1e-7);
    CHECK(std::abs(std::abs(fe(nt.point()[m])) - 1.0) < 1e-7);
  }
  CHECK(std::abs(fi(0.0)) < 1e-14);
  const double h = 1e-4;
  const cplx d0 = (fi(h) - fi(-h)) / (2 * h);
  CHECK(d0.real() > 0.0);
  CHECK(std::abs(d0.imag()) < 1e-7 * d0.real());
  const cplx far = 1e3 * nt.diameter * cplx(0.6, 0.8);
  // f_e(z) = z / capacity + a_0 + a_1 / z + ...; the difference removes a_0
  const cplx ratio = (fe(2.0 * far) - fe(far)) / far;
  CHECK(std::abs(ratio.imag()) < 1e-6);
  CHECK(ratio.real() == doctest::Approx(1.0 / fe.capacity()).epsilon(1e-6));
}

TEST_CASE("maps are defined on one side only") {
  const NodeTable nt = discretize_trapezoid(Contour::circle(), 64, 4);
  const ConformalMap fi = ConformalMap::solve(nt, MapDirection::Interior, 3);
  const ConformalMap fe = ConformalMap::solve(nt, MapDirection::Exterior, 3);
  CHECK_THROWS_AS(fi(cplx(2.0, 0.0)), DomainError);
  CHECK_THROWS_AS(fe(cplx(0.2, 0.0)), DomainError);
  CHECK(std::isnan(fi.capacity()));
}

TEST_CASE("the maps are conformal and one-to-one") {
  const NodeTable nt = discretize_trapezoid(Contour::jellyfish(), 400, 4);
  for (MapDirection dir : {MapDirection::Interior, MapDirection::Exterior}) {
    const ConformalMap f = ConformalMap::solve(nt, dir, 3);
    const std::vector<cplx> pts = dir == MapDirection::Interior
                                      ? std::vector<cplx>{cplx(0.2, 0.1), cplx(-0.3, 0.6), cplx(0.5, -0.4)}
                                      : std::vector<cplx>{cplx(2.0, 0.1), cplx(-1.3, 2.0), cplx(0.1, -2.0)};
    const double h = 1e-5;
    for (cplx z : pts) {
      // Cauchy-Riemann: the x and y difference quotients differ by a factor i
      const cplx dx = (f(z + h) - f(z - h)) / (2 * h);
      const cplx dy = (f(z + cplx(0, h)) - f(z - cplx(0, h))) / (2 * h);
      CHECK(std::abs(dy - cplx(0, 1) * dx) < 1e-6 * std::abs(dx));
    }
    std::vector<cplx> img;
    for (cplx z : pts) img.push_back(f(z));
    for (std::size_t a = 0; a < img.size(); ++a)
      for (std::size_t b = a + 1; b < img.size(); ++b) CHECK(std::abs(img[a] - img[b]) > 1e-3);
    for (cplx w : img) CHECK((dir == MapDirection::Interior ? std::abs(w) < 1.0 : std::abs(w) > 1.0));
  }
}

TEST_CASE("grid export") {
  const NodeTable nt = discretize_trapezoid(Contour::ellipse(2.0, 1.0), 128, 4);
  const ConformalMap fe = ConformalMap::solve(nt, MapDirection::Exterior, 3);
  PolarGrid g;
  g.n_radial = 4;
  g.n_angular = 8;
  const auto rows = map_grid(fe, g);
  CHECK(rows.size() == 32);
  const auto dir = std::filesystem::temp_directory_path() / "densint_conformal_test";
  std::filesystem::create_directories(dir);
  export_mapped_grid(fe, rows, (dir / "m.csv").string(), (dir / "m.json").string());
  std::ifstream csv(dir / "m.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "x,y,re_f,im_f");
  std::size_t lines = 0;
  for (std::string l; std::getline(csv, l);) ++lines;
  CHECK(lines == rows.size());
  std::ifstream js(dir / "m.json");
  const auto j = nlohmann::json::parse(js);
  CHECK(j.at("direction") == "exterior");
  CHECK(j.at("capacity").get<double>() == doctest::Approx(fe.capacity()));
  CHECK(j.at("M") == 128);
  CHECK(j.at("N") == 3);
  std::filesystem::remove_all(dir);

  CartesianGrid c;
  c.nx = c.ny = 10;
  const auto inside = map_grid(ConformalMap::solve(nt, MapDirection::Interior, 3), c);
  // the rows y = +-1 fall outside the ellipse
  CHECK(inside.size() == 80);
}
