#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "densint/nodes.hpp"

namespace testing_support {

using densint::cplx;

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

inline double max_abs(const std::vector<double>& a) {
  double e = 0.0;
  for (double v : a) e = std::max(e, std::abs(v));
  return e;
}

// Polar angle of each node about the origin.
inline std::vector<double> angles(const densint::NodeTable& nodes) {
  std::vector<double> th;
  for (cplx z : nodes.point()) th.push_back(std::arg(z));
  return th;
}

template <class F>
std::vector<double> sample(const densint::NodeTable& nodes, F f) {
  std::vector<double> v;
  for (cplx z : nodes.point()) v.push_back(f(z));
  return v;
}

// Composite Gauss-Legendre on [a, b] with `panels` 8-point panels.
template <class F>
auto gauss_legendre(F f, double a, double b, int panels) -> decltype(f(a)) {
  static const double x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                              -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                              0.7966664774136267,  0.9602898564975363};
  static const double w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                              0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                              0.2223810344533745, 0.1012285362903763};
  decltype(f(a)) s{};
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    for (int k = 0; k < 8; ++k) s += w[k] * 0.5 * h * f(c + 0.5 * h * x[k]);
  }
  return s;
}

}  // namespace testing_support
