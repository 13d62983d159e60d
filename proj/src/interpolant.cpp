#include "densint/interpolant.hpp"

#include <string>

#include "densint/errors.hpp"
#include "densint/numerics.hpp"

namespace densint {

InterpolantTable build_interpolant_table(const NodeTable& nodes, const DensityField& density,
                                         int N) {
  if (N < 0 || N > kMaxInterpolationOrder)
    throw OrderError("interpolation order must lie in [0, " +
                     std::to_string(kMaxInterpolationOrder) + "]");
  const std::size_t M = nodes.size();
  if (density.size() != M) throw ValidationError("density and node table sizes differ");
  const auto& d1 = nodes.deriv[1];
  for (std::size_t m = 0; m < M; ++m)
    if (d1[m] == cplx{}) throw DegenerateParametrizationError("gamma' is zero at a node");

  InterpolantTable table(N, M);
  std::vector<cplx> col = density.values;
  for (int j = 0;; ++j) {
    for (std::size_t m = 0; m < M; ++m) table.at(m, j) = col[m];
    if (j == N) break;
    col = differentiate(nodes, col);
    for (std::size_t m = 0; m < M; ++m) col[m] /= d1[m];
  }
  return table;
}

std::vector<cplx> bell_table(std::span<const cplx> x, int N) {
  const auto n1 = static_cast<std::size_t>(N + 1);
  std::vector<cplx> B(n1 * n1, cplx{});
  auto at = [&](int m, int j) -> cplx& {
    return B[static_cast<std::size_t>(m) * n1 + static_cast<std::size_t>(j)];
  };
  std::vector<double> binom(n1 * n1, 0.0);
  for (int a = 0; a <= N; ++a) {
    binom[static_cast<std::size_t>(a) * n1] = 1.0;
    for (int b = 1; b <= a; ++b)
      binom[static_cast<std::size_t>(a) * n1 + b] =
          binom[static_cast<std::size_t>(a - 1) * n1 + b - 1] +
          (b <= a - 1 ? binom[static_cast<std::size_t>(a - 1) * n1 + b] : 0.0);
  }
  at(0, 0) = 1.0;
  for (int m = 1; m <= N; ++m) {
    for (int j = 1; j <= m; ++j) {
      cplx s{};
      for (int i = 1; i <= m - j + 1; ++i)
        s += binom[static_cast<std::size_t>(m - 1) * n1 + (i - 1)] *
             x[static_cast<std::size_t>(i)] * at(m - i, j - 1);
      at(m, j) = s;
    }
  }
  return B;
}

std::vector<cplx> bell_coefficients(std::span<const cplx> gamma_derivs,
                                    std::span<const cplx> phi_derivs, int N) {
  if (N < 0) throw OrderError("interpolation order must be non-negative");
  if (gamma_derivs.size() < static_cast<std::size_t>(N + 1) ||
      phi_derivs.size() < static_cast<std::size_t>(N + 1))
    throw ValidationError("not enough derivative columns for the Bell system");
  if (N >= 1 && gamma_derivs[1] == cplx{})
    throw DegenerateParametrizationError("gamma' is zero");
  const auto B = bell_table(gamma_derivs, N);
  const auto n1 = static_cast<std::size_t>(N + 1);
  std::vector<cplx> c(n1);
  c[0] = phi_derivs[0];
  for (std::size_t m = 1; m < n1; ++m) {
    cplx s = phi_derivs[m];
    for (std::size_t j = 1; j < m; ++j) s -= c[j] * B[m * n1 + j];
    c[m] = s / B[m * n1 + m];
  }
  return c;
}

std::vector<cplx> build_interpolant_bell(const NodeTable& nodes, const DensityField& density,
                                         int N, std::size_t m) {
  if (nodes.max_derivative() < N)
    throw ValidationError("node table lacks gamma derivatives up to order N");
  if (density.param_derivs.size() < static_cast<std::size_t>(N + 1))
    throw ValidationError("density lacks parametric derivatives up to order N");
  std::vector<cplx> g(static_cast<std::size_t>(N + 1)), f(static_cast<std::size_t>(N + 1));
  for (int k = 0; k <= N; ++k) {
    g[k] = nodes.deriv[k][m];
    f[k] = density.param_derivs[k][m];
  }
  return bell_coefficients(g, f, N);
}

cplx taylor_eval(std::span<const cplx> c, cplx w, int n) {
  const int N = static_cast<int>(c.size()) - 1;
  if (n < 0 || n > N) throw OrderError("derivative order exceeds interpolation order");
  // sum_j c_{n+j} w^j / j!
  cplx acc = c[static_cast<std::size_t>(N)];
  for (int j = N - n - 1; j >= 0; --j)
    acc = c[static_cast<std::size_t>(n + j)] + acc * w / static_cast<double>(j + 1);
  return acc;
}

cplx taylor_integral(std::span<const cplx> c, cplx w) {
  const int N = static_cast<int>(c.size()) - 1;
  cplx acc = c[static_cast<std::size_t>(N)];
  for (int j = N - 1; j >= 0; --j) acc = c[static_cast<std::size_t>(j)] + acc * w / static_cast<double>(j + 2);
  return acc * w;
}

cplx eval_PN(const InterpolantTable& table, const NodeTable& nodes, std::size_t m, cplx z,
             int n) {
  return taylor_eval(table.row(m), z - nodes.point()[m], n);
}

cplx integrate_PN_segment(const InterpolantTable& table, const NodeTable& nodes, std::size_t m,
                          cplx z) {
  return taylor_integral(table.row(m), z - nodes.point()[m]);
}

}  // namespace densint
