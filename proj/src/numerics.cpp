#include "densint/numerics.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "densint/contour.hpp"
#include "densint/errors.hpp"

namespace densint {
namespace {

// The FFTW planner is not re-entrant; execution on plan-owned buffers is
// per-thread, so plans are cached thread-locally and created under a lock.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class ComplexDft {
 public:
  explicit ComplexDft(std::size_t n) : n_(n) {
    in_ = fftw_alloc_complex(n);
    out_ = fftw_alloc_complex(n);
    std::lock_guard lock(planner_mutex());
    const int ni = static_cast<int>(n);
    forward_ = fftw_plan_dft_1d(ni, in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(ni, in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~ComplexDft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(in_);
    fftw_free(out_);
  }
  ComplexDft(const ComplexDft&) = delete;
  ComplexDft& operator=(const ComplexDft&) = delete;

  cplx* in() { return reinterpret_cast<cplx*>(in_); }
  cplx* out() { return reinterpret_cast<cplx*>(out_); }
  void forward() { fftw_execute(forward_); }
  void backward() { fftw_execute(backward_); }

 private:
  std::size_t n_;
  fftw_complex* in_;
  fftw_complex* out_;
  fftw_plan forward_;
  fftw_plan backward_;
};

class RealR2r {
 public:
  RealR2r(std::size_t n, fftw_r2r_kind kind) {
    in_ = fftw_alloc_real(n);
    out_ = fftw_alloc_real(n);
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_r2r_1d(static_cast<int>(n), in_, out_, kind, FFTW_ESTIMATE);
  }
  ~RealR2r() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(in_);
    fftw_free(out_);
  }
  RealR2r(const RealR2r&) = delete;
  RealR2r& operator=(const RealR2r&) = delete;

  double* in() { return in_; }
  double* out() { return out_; }
  void run() { fftw_execute(plan_); }

 private:
  double* in_;
  double* out_;
  fftw_plan plan_;
};

ComplexDft& dft(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<ComplexDft>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<ComplexDft>(n);
  return *slot;
}

// REDFT10 is the DCT-II, REDFT01 its inverse (DCT-III), both unnormalized.
RealR2r& r2r(std::size_t n, fftw_r2r_kind kind) {
  thread_local std::map<std::pair<std::size_t, int>, std::unique_ptr<RealR2r>> cache;
  auto& slot = cache[{n, static_cast<int>(kind)}];
  if (!slot) slot = std::make_unique<RealR2r>(n, kind);
  return *slot;
}

// Chebyshev coefficients a_k of the interpolant through real samples at the
// Chebyshev zeros (descending), then derivative samples at the same points.
void cheb_diff_real(const double* f, double* df, std::size_t n) {
  RealR2r& dct2 = r2r(n, FFTW_REDFT10);
  for (std::size_t j = 0; j < n; ++j) dct2.in()[j] = f[j];
  dct2.run();
  std::vector<double> a(n);
  for (std::size_t k = 0; k < n; ++k) a[k] = dct2.out()[k] / static_cast<double>(n);
  a[0] *= 0.5;

  std::vector<double> b(n + 1, 0.0);
  for (std::size_t k = n - 1; k >= 1; --k) b[k - 1] = b[k + 1] + 2.0 * static_cast<double>(k) * a[k];
  b[0] *= 0.5;

  RealR2r& dct3 = r2r(n, FFTW_REDFT01);
  dct3.in()[0] = b[0];
  for (std::size_t k = 1; k < n; ++k) dct3.in()[k] = 0.5 * b[k];
  dct3.run();
  for (std::size_t j = 0; j < n; ++j) df[j] = dct3.out()[j];
}

}  // namespace

QuadratureRule trapezoid_nodes(std::size_t M) {
  if (M < 2) throw ValidationError("trapezoid rule needs M >= 2");
  QuadratureRule r;
  r.nodes.resize(M);
  r.weights.assign(M, kTwoPi / static_cast<double>(M));
  for (std::size_t m = 0; m < M; ++m)
    r.nodes[m] = kTwoPi * static_cast<double>(m) / static_cast<double>(M);
  return r;
}

QuadratureRule fejer_rule(std::size_t M) {
  if (M < 1) throw ValidationError("Fejer rule needs M >= 1");
  QuadratureRule r;
  r.nodes.resize(M);
  r.weights.resize(M);
  for (std::size_t m = 1; m <= M; ++m)
    r.nodes[m - 1] = std::cos(static_cast<double>(2 * m - 1) * kPi / (2.0 * static_cast<double>(M)));
  if (M == 1) {
    r.nodes[0] = 0.0;
    r.weights[0] = 2.0;
    return r;
  }
  // w_m = (2/M) (1 - 2 sum_l cos(2 l theta_m) / (4 l^2 - 1)) is a DCT-III of
  // the coefficient vector with entries at even frequencies 2l < M; the
  // l = M/2 term vanishes at every node.
  RealR2r& dct3 = r2r(M, FFTW_REDFT01);
  for (std::size_t k = 0; k < M; ++k) dct3.in()[k] = 0.0;
  dct3.in()[0] = 1.0;
  for (std::size_t l = 1; 2 * l < M; ++l) {
    const double ld = static_cast<double>(l);
    dct3.in()[2 * l] = -1.0 / (4.0 * ld * ld - 1.0);
  }
  dct3.run();
  for (std::size_t m = 0; m < M; ++m) r.weights[m] = 2.0 / static_cast<double>(M) * dct3.out()[m];
  return r;
}

std::vector<cplx> fft_diff_periodic(std::span<const cplx> values) {
  const std::size_t n = values.size();
  std::vector<cplx> out(n, cplx{});
  if (n < 2) return out;
  ComplexDft& f = dft(n);
  std::copy(values.begin(), values.end(), f.in());
  f.forward();
  const double inv = 1.0 / static_cast<double>(n);
  cplx* spec = f.out();
  for (std::size_t k = 0; k < n; ++k) {
    double wave;
    if (2 * k < n) {
      wave = static_cast<double>(k);
    } else if (2 * k == n) {
      wave = 0.0;
    } else {
      wave = static_cast<double>(k) - static_cast<double>(n);
    }
    f.in()[k] = spec[k] * cplx(0.0, wave * inv);
  }
  f.backward();
  std::copy(f.out(), f.out() + n, out.begin());
  return out;
}

std::vector<cplx> cheb_diff(std::span<const cplx> values) {
  const std::size_t n = values.size();
  std::vector<cplx> out(n, cplx{});
  if (n < 2) return out;
  std::vector<double> re(n), im(n), dre(n), dim(n);
  for (std::size_t j = 0; j < n; ++j) {
    re[j] = values[j].real();
    im[j] = values[j].imag();
  }
  cheb_diff_real(re.data(), dre.data(), n);
  cheb_diff_real(im.data(), dim.data(), n);
  for (std::size_t j = 0; j < n; ++j) out[j] = {dre[j], dim[j]};
  return out;
}

}  // namespace densint
