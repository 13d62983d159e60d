#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "densint/nodes.hpp"

namespace densint {

// Row m holds c_0(z_m), ..., c_N(z_m), the coefficients of
// P_N(z, z_m) = sum_j c_j(z_m) / j! (z - z_m)^j.
class InterpolantTable {
 public:
  InterpolantTable(int order, std::size_t rows)
      : order_(order), coef_(rows * static_cast<std::size_t>(order + 1)) {}

  int order() const { return order_; }
  std::size_t rows() const { return coef_.size() / static_cast<std::size_t>(order_ + 1); }
  std::span<const cplx> row(std::size_t m) const {
    return {coef_.data() + m * stride(), stride()};
  }
  cplx& at(std::size_t m, int j) { return coef_[m * stride() + static_cast<std::size_t>(j)]; }
  cplx at(std::size_t m, int j) const {
    return coef_[m * stride() + static_cast<std::size_t>(j)];
  }

 private:
  std::size_t stride() const { return static_cast<std::size_t>(order_ + 1); }
  int order_;
  std::vector<cplx> coef_;
};

// Algorithm 1: column 0 is phi, column j+1 is the parametric derivative of
// column j divided by gamma'.
InterpolantTable build_interpolant_table(const NodeTable& nodes, const DensityField& density,
                                         int N);

// Faa di Bruno oracle at a single parameter value: gamma_derivs[k] and
// phi_derivs[k] are the k-th parametric derivatives (k = 0..N) of gamma and
// of phi(gamma(t)). Returns c_0..c_N by forward substitution.
std::vector<cplx> bell_coefficients(std::span<const cplx> gamma_derivs,
                                    std::span<const cplx> phi_derivs, int N);

// Incomplete Bell polynomials B_{m,j}(x_1, x_2, ...) for 0 <= j <= m <= N,
// returned as a dense (N+1) x (N+1) lower-triangular array, row-major.
std::vector<cplx> bell_table(std::span<const cplx> x, int N);

// Same oracle on node m, with derivative columns taken from the tables.
std::vector<cplx> build_interpolant_bell(const NodeTable& nodes, const DensityField& density,
                                         int N, std::size_t m);

// n-th z-derivative of a Taylor polynomial with coefficients c_j / j! at
// offset w = z - z0.
cplx taylor_eval(std::span<const cplx> c, cplx w, int n = 0);

// Antiderivative sum_j c_j / (j+1)! w^(j+1), vanishing at w = 0.
cplx taylor_integral(std::span<const cplx> c, cplx w);

cplx eval_PN(const InterpolantTable& table, const NodeTable& nodes, std::size_t m, cplx z,
             int n = 0);

cplx integrate_PN_segment(const InterpolantTable& table, const NodeTable& nodes, std::size_t m,
                          cplx z);

}  // namespace densint
