#ifndef BERGMAN_JET_HPP_
#define BERGMAN_JET_HPP_

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "bergman/core.hpp"

namespace bergman {

/**
 * Truncated Taylor expansion at a point, stored with a shared log scale.
 *
 * The represented series is exp(log_scale) * sum_k coeff[k] t^k, so
 * coeff[k] * k! * exp(log_scale) is the k-th derivative. Keeping the scale
 * separate lets kernel jets of enormous (or vanishing) magnitude combine
 * without overflow; normalize() keeps max |coeff| == 1.
 */
class Jet {
 public:
  Jet() = default;
  explicit Jet(std::size_t order) : coeff_(order + 1, cplx{0}), log_scale_(0) {}
  Jet(std::vector<cplx> coeff, real log_scale = 0)
      : coeff_(std::move(coeff)), log_scale_(log_scale) {
    normalize();
  }

  static Jet constant(cplx value, std::size_t order) {
    Jet j(order);
    j.coeff_[0] = value;
    j.normalize();
    return j;
  }
  /// Jet of the identity map t -> z + t.
  static Jet variable(cplx z, std::size_t order) {
    Jet j(order);
    j.coeff_[0] = z;
    if (order >= 1) j.coeff_[1] = 1;
    j.normalize();
    return j;
  }

  std::size_t order() const { return coeff_.size() - 1; }
  std::span<const cplx> coefficients() const { return coeff_; }
  real log_scale() const { return log_scale_; }
  bool is_zero() const { return log_scale_ == kNegInf; }

  /// Taylor coefficient f^(k)(z)/k! as an ordinary number (may over/underflow).
  cplx taylor(std::size_t k) const {
    if (is_zero()) return 0;
    return coeff_.at(k) * std::exp(log_scale_);
  }
  /// f^(k)(z) as an ordinary number (may over/underflow).
  cplx derivative(std::size_t k) const {
    if (is_zero()) return 0;
    return coeff_.at(k) * std::exp(log_scale_ + std::lgamma(real(k) + 1));
  }
  /// log |f^(k)(z)|; -inf for an exact zero.
  real log_abs_derivative(std::size_t k) const {
    const real a = std::abs(coeff_.at(k));
    if (is_zero() || a == 0) return kNegInf;
    return std::log(a) + log_scale_ + std::lgamma(real(k) + 1);
  }
  real phase(std::size_t k) const { return std::arg(coeff_.at(k)); }

  std::vector<cplx> derivatives() const {
    std::vector<cplx> d(coeff_.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = derivative(k);
    return d;
  }

  /// Coefficients multiplied by exp(log_scale); use only for bounded jets.
  std::vector<cplx> plain() const {
    std::vector<cplx> out(coeff_.size(), cplx{0});
    if (is_zero()) return out;
    const real s = std::exp(log_scale_);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = coeff_[k] * s;
    return out;
  }

  Jet& operator*=(cplx c) {
    for (auto& x : coeff_) x *= c;
    normalize();
    return *this;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    const std::size_t n = std::min(a.order(), b.order());
    if (a.is_zero()) return b.truncated(n);
    if (b.is_zero()) return a.truncated(n);
    const real hi = std::max(a.log_scale_, b.log_scale_);
    const real fa = std::exp(a.log_scale_ - hi);
    const real fb = std::exp(b.log_scale_ - hi);
    std::vector<cplx> c(n + 1);
    for (std::size_t k = 0; k <= n; ++k) c[k] = a.coeff_[k] * fa + b.coeff_[k] * fb;
    return Jet(std::move(c), hi);
  }
  friend Jet operator-(const Jet& a, const Jet& b) { return a + b * cplx{-1}; }
  friend Jet operator*(Jet a, cplx c) { return a *= c; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    const std::size_t n = std::min(a.order(), b.order());
    if (a.is_zero() || b.is_zero()) return zero(n);
    std::vector<cplx> c(n + 1, cplx{0});
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; i + j <= n; ++j) c[i + j] += a.coeff_[i] * b.coeff_[j];
    }
    return Jet(std::move(c), a.log_scale_ + b.log_scale_);
  }

  /// Series quotient; requires b(z) != 0.
  friend Jet operator/(const Jet& a, const Jet& b) {
    const std::size_t n = std::min(a.order(), b.order());
    if (b.is_zero() || b.coeff_[0] == cplx{0}) {
      throw numeric_error("jet division by a series vanishing at the base point");
    }
    if (a.is_zero()) return zero(n);
    std::vector<cplx> q(n + 1, cplx{0});
    for (std::size_t k = 0; k <= n; ++k) {
      cplx s = a.coeff_[k];
      for (std::size_t j = 1; j <= k; ++j) s -= b.coeff_[j] * q[k - j];
      q[k] = s / b.coeff_[0];
    }
    return Jet(std::move(q), a.log_scale_ - b.log_scale_);
  }

  /// outer(inner(z + t)) where *this is the jet of `outer` at inner(z).
  /// `inner` must be of moderate size (its value is a point of the disk).
  Jet compose(const Jet& inner) const {
    const std::size_t n = std::min(order(), inner.order());
    if (is_zero()) return zero(n);
    std::vector<cplx> delta = inner.plain();
    delta.resize(n + 1);
    delta[0] = 0;
    // Horner in the series ring: o_n, then o_{n-1} + delta * acc, ...
    std::vector<cplx> acc(n + 1, cplx{0});
    for (std::size_t i = n + 1; i-- > 0;) {
      std::vector<cplx> next(n + 1, cplx{0});
      for (std::size_t a = 0; a <= n; ++a) {
        if (acc[a] == cplx{0}) continue;
        for (std::size_t b = 1; a + b <= n; ++b) next[a + b] += acc[a] * delta[b];
      }
      next[0] += coeff_[i];
      acc = std::move(next);
    }
    return Jet(std::move(acc), log_scale_);
  }

  static Jet zero(std::size_t order) {
    Jet j(order);
    j.log_scale_ = kNegInf;
    return j;
  }

  Jet truncated(std::size_t order) const {
    Jet j = *this;
    j.coeff_.resize(order + 1, cplx{0});
    return j;
  }

 private:
  void normalize() {
    real big = 0;
    for (const auto& x : coeff_) {
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
        throw numeric_error("non-finite jet coefficient");
      }
      big = std::max(big, std::abs(x));
    }
    if (big == 0 || log_scale_ == kNegInf) {
      std::fill(coeff_.begin(), coeff_.end(), cplx{0});
      log_scale_ = kNegInf;
      return;
    }
    for (auto& x : coeff_) x /= big;
    log_scale_ += std::log(big);
  }

  std::vector<cplx> coeff_{cplx{0}};
  real log_scale_ = kNegInf;
};

}  // namespace bergman

#endif  // BERGMAN_JET_HPP_
