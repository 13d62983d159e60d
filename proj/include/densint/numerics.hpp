#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace densint {

using cplx = std::complex<double>;

// Repeated spectral differentiation amplifies roundoff roughly like M^n;
// interpolation orders above this are rejected.
inline constexpr int kMaxInterpolationOrder = 8;

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// t_m = 2 pi (m-1) / M with uniform weights 2 pi / M.
QuadratureRule trapezoid_nodes(std::size_t M);

// Fejer's first rule on [-1, 1]: nodes at the Chebyshev zeros
// cos((2m-1) pi / 2M) (in that order, i.e. descending) and weights from the
// cosine series, summed with a DCT.
QuadratureRule fejer_rule(std::size_t M);

// Derivative of the trigonometric interpolant of samples at trapezoid nodes.
// The Nyquist mode of an even-length input is dropped.
std::vector<cplx> fft_diff_periodic(std::span<const cplx> values);

// Derivative of the degree M-1 Chebyshev interpolant of samples taken at the
// Fejer nodes (descending order, as returned by fejer_rule).
std::vector<cplx> cheb_diff(std::span<const cplx> values);

}  // namespace densint
