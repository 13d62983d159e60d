#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "densint/errors.hpp"

namespace densint {

template <class T>
struct GmresResult {
  std::vector<T> x;
  std::vector<double> residuals;  // relative residual after each iteration, [0] = 1
  std::size_t iterations = 0;
};

struct GmresOptions {
  double tol = 1e-12;
  std::size_t max_iter = 400;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }
inline double conj_of(double v) { return v; }
inline std::complex<double> conj_of(const std::complex<double>& v) { return std::conj(v); }

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  T s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += conj_of(a[i]) * b[i];
  return s;
}

template <class T>
double norm2(const std::vector<T>& a) {
  double s = 0.0;
  for (const auto& v : a) s += magnitude(v) * magnitude(v);
  return std::sqrt(s);
}

// Rotation that maps (a, b) to (r, 0).
template <class T>
void givens(const T& a, const T& b, double& c, T& s) {
  const double ma = magnitude(a), mb = magnitude(b);
  if (mb == 0.0) {
    c = 1.0;
    s = T{};
    return;
  }
  if (ma == 0.0) {
    c = 0.0;
    s = conj_of(b) / mb;
    return;
  }
  const double r = std::hypot(ma, mb);
  c = ma / r;
  s = (a / ma) * conj_of(b) / r;
}

}  // namespace detail

// Unrestarted GMRES with modified Gram-Schmidt Arnoldi and Givens updates of
// the least-squares problem. Starts from x0 = 0.
template <class T>
GmresResult<T> gmres(const std::function<std::vector<T>(const std::vector<T>&)>& matvec,
                     const std::vector<T>& b, const GmresOptions& opt = {}) {
  using detail::conj_of;
  if (!(opt.tol > 0.0)) throw ValidationError("gmres tolerance must be positive");
  const std::size_t n = b.size();
  GmresResult<T> res;
  res.x.assign(n, T{});
  const double bnorm = detail::norm2(b);
  res.residuals.push_back(1.0);
  if (bnorm == 0.0) return res;

  std::vector<std::vector<T>> V;
  V.emplace_back(n);
  for (std::size_t i = 0; i < n; ++i) V[0][i] = b[i] / bnorm;

  std::vector<std::vector<T>> H;  // columns of the rotated Hessenberg matrix
  std::vector<double> cs;
  std::vector<T> sn;
  std::vector<T> g(1, T(bnorm));

  std::size_t k = 0;
  bool done = false;
  while (k < opt.max_iter && !done) {
    std::vector<T> w = matvec(V[k]);
    if (w.size() != n) throw ValidationError("gmres matvec returned wrong size");
    std::vector<T> h(k + 2, T{});
    for (std::size_t j = 0; j <= k; ++j) {
      h[j] = detail::dot(V[j], w);
      for (std::size_t i = 0; i < n; ++i) w[i] -= h[j] * V[j][i];
    }
    const double wn = detail::norm2(w);
    h[k + 1] = T(wn);

    for (std::size_t j = 0; j < k; ++j) {
      const T t = cs[j] * h[j] + sn[j] * h[j + 1];
      h[j + 1] = -conj_of(sn[j]) * h[j] + cs[j] * h[j + 1];
      h[j] = t;
    }
    double c;
    T s;
    detail::givens(h[k], h[k + 1], c, s);
    h[k] = c * h[k] + s * h[k + 1];
    h[k + 1] = T{};
    cs.push_back(c);
    sn.push_back(s);
    g.push_back(-conj_of(s) * g[k]);
    g[k] = c * g[k];
    H.push_back(std::move(h));

    const double rel = detail::magnitude(g[k + 1]) / bnorm;
    res.residuals.push_back(rel);
    ++k;
    if (rel <= opt.tol || wn <= 1e-300 * bnorm) {
      done = true;
    } else if (k == n && n > 0) {
      // Krylov space exhausted; the Arnoldi basis can go no further.
      done = true;
    } else {
      V.emplace_back(n);
      for (std::size_t i = 0; i < n; ++i) V.back()[i] = w[i] / wn;
    }
  }

  std::vector<T> y(k);
  for (std::size_t ii = k; ii-- > 0;) {
    T s = g[ii];
    for (std::size_t j = ii + 1; j < k; ++j) s -= H[j][ii] * y[j];
    y[ii] = s / H[ii][ii];
  }
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < n; ++i) res.x[i] += y[j] * V[j][i];
  res.iterations = k;

  if (res.residuals.back() > opt.tol)
    throw ConvergenceError("gmres did not reach tolerance in " + std::to_string(k) + " iterations",
                           res.residuals);
  return res;
}

}  // namespace densint
