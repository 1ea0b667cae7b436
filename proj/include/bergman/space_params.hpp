#ifndef BERGMAN_SPACE_PARAMS_HPP_
#define BERGMAN_SPACE_PARAMS_HPP_

#include <string>

#include "bergman/core.hpp"

namespace bergman {

/// The pair (p, alpha) naming A^p_alpha; alpha == -1 is the Hardy space H^p,
/// p == infinity the weighted sup-norm space.
struct SpaceParams {
  real p = 2;
  real alpha = 0;

  SpaceParams() = default;
  SpaceParams(real p_, real alpha_) : p(p_), alpha(alpha_) { validate(); }

  void validate() const {
    if (!(p > 0)) throw domain_error("SpaceParams: p must be positive");
    if (!(alpha >= -1) || !std::isfinite(alpha)) throw domain_error("SpaceParams: alpha must be >= -1");
  }

  bool hardy() const { return alpha == -1; }
  bool sup_norm() const { return std::isinf(p); }

  /// (2 + alpha) / p, or 0 when p is infinite.
  real shift() const { return sup_norm() ? real(0) : (2 + alpha) / p; }
  /// Growth exponent (2 + alpha)/p + k of the k-th derivative.
  real exponent(int k) const { return shift() + k; }

  std::string to_string() const {
    return "(p=" + (sup_norm() ? std::string("inf") : std::to_string(static_cast<double>(p))) +
           ", alpha=" + std::to_string(static_cast<double>(alpha)) + ")";
  }
};

}  // namespace bergman

#endif  // BERGMAN_SPACE_PARAMS_HPP_
