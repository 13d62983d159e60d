#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace densint {

using cplx = std::complex<double>;

// Truncated Taylor series a_0 + a_1 s + ... + a_K s^K in a real variable s.
// Arithmetic is exact up to order K, so derivatives of composed closed-form
// expressions come out exact: f^(k)(t) = k! * a_k.
class Jet {
 public:
  Jet(std::size_t order, cplx value) : c_(order + 1, cplx{}) { c_[0] = value; }

  // Independent variable t + s.
  static Jet variable(std::size_t order, double t) {
    Jet j(order, t);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  std::size_t order() const { return c_.size() - 1; }
  const cplx& operator[](std::size_t k) const { return c_[k]; }
  cplx& operator[](std::size_t k) { return c_[k]; }

  // k-th derivative w.r.t. the expansion variable.
  cplx derivative(std::size_t k) const {
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return f * c_[k];
  }

  std::vector<cplx> derivatives() const {
    std::vector<cplx> out(c_.size());
    for (std::size_t k = 0; k < c_.size(); ++k) out[k] = derivative(k);
    return out;
  }

  Jet& operator+=(const Jet& o) {
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator+=(cplx a) {
    c_[0] += a;
    return *this;
  }
  Jet& operator*=(cplx a) {
    for (auto& v : c_) v *= a;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, cplx b) { return a += b; }
  friend Jet operator+(cplx b, Jet a) { return a += b; }
  friend Jet operator-(Jet a, cplx b) { return a += -b; }
  friend Jet operator*(Jet a, cplx b) { return a *= b; }
  friend Jet operator*(cplx b, Jet a) { return a *= b; }
  friend Jet operator-(Jet a) { return a *= -1.0; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.order(), 0.0);
    for (std::size_t k = 0; k < r.c_.size(); ++k) {
      cplx s{};
      for (std::size_t j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
      r.c_[k] = s;
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r(a.order(), 0.0);
    for (std::size_t k = 0; k < r.c_.size(); ++k) {
      cplx s = a.c_[k];
      for (std::size_t j = 1; j <= k; ++j) s -= b.c_[j] * r.c_[k - j];
      r.c_[k] = s / b.c_[0];
    }
    return r;
  }

  friend Jet exp(const Jet& a) {
    Jet r(a.order(), std::exp(a.c_[0]));
    for (std::size_t k = 1; k < r.c_.size(); ++k) {
      cplx s{};
      for (std::size_t j = 1; j <= k; ++j)
        s += static_cast<double>(j) * a.c_[j] * r.c_[k - j];
      r.c_[k] = s / static_cast<double>(k);
    }
    return r;
  }

  friend Jet cos(const Jet& a) {
    const cplx i{0.0, 1.0};
    return 0.5 * (exp(i * a) + exp(-i * a));
  }

  friend Jet sin(const Jet& a) {
    const cplx i{0.0, 1.0};
    return (exp(i * a) - exp(-i * a)) * (-0.5 * i);
  }

 private:
  std::vector<cplx> c_;
};

}  // namespace densint
