#ifndef BERGMAN_CORE_HPP_
#define BERGMAN_CORE_HPP_

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bergman {

// Extended precision throughout: the clustered interpolation systems cancel
// terms whose magnitudes differ by (1-|lambda|^2)^-N, and double runs out.
using real = long double;
using cplx = std::complex<real>;

inline constexpr real kPi = std::numbers::pi_v<real>;
inline constexpr real kInf = std::numeric_limits<real>::infinity();
inline constexpr real kNegInf = -std::numeric_limits<real>::infinity();
inline constexpr real kNaN = std::numeric_limits<real>::quiet_NaN();

/// Input outside the domain of an operation (points off the disk, bad params).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Floating-point breakdown during evaluation; `what()` carries the node path.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class singular_matrix_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, real residual)
      : std::runtime_error(what), residual_(residual) {}
  real residual() const { return residual_; }

 private:
  real residual_;
};

inline void require_in_disk(cplx z, const char* what) {
  if (!(std::abs(z) < 1)) {
    throw domain_error(std::string(what) + ": point must lie in the open unit disk");
  }
}

inline void require_in_closed_disk(cplx z, const char* what) {
  if (!(std::abs(z) <= 1)) {
    throw domain_error(std::string(what) + ": point must lie in the closed unit disk");
  }
}

/// 1 - |z|^2 without cancellation for |z| near 1.
inline real one_minus_abs2(cplx z) {
  const real r = std::abs(z);
  return (1 - r) * (1 + r);
}

/// log(1 + w) for complex w, accurate when |w| is small.
inline cplx log1p(cplx w) {
  const real re = w.real();
  const real im = w.imag();
  const real mod_part = 0.5L * std::log1p(2 * re + re * re + im * im);
  return {mod_part, std::atan2(im, 1 + re)};
}

/// log(exp(a) + exp(b)) for a, b possibly -inf.
inline real log_add(real a, real b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const real hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

/// Sum of log(a + i) for i in [0, k): the log of the rising factorial (a)_k.
inline real log_pochhammer(real a, int k) {
  real s = 0;
  for (int i = 0; i < k; ++i) s += std::log(a + i);
  return s;
}

}  // namespace bergman

#endif  // BERGMAN_CORE_HPP_
