#ifndef BERGMAN_BERGMAN_SPACE_HPP_
#define BERGMAN_BERGMAN_SPACE_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bergman/analytic_fn.hpp"
#include "bergman/core.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/space_params.hpp"

namespace bergman {

struct QuadratureConfig {
  int radial = 48;
  int angular = 96;
  /// Integrate in coordinates w = (c - zeta)/(1 - conj(c) zeta) around this point.
  std::optional<cplx> center;
  int max_refinements = 4;
  real rel_tol = 1e-8L;

  void validate() const {
    if (radial < 4 || angular < 4) throw domain_error("QuadratureConfig: node counts must be >= 4");
    if (!(rel_tol > 0)) throw domain_error("QuadratureConfig: tolerance must be positive");
    if (max_refinements < 0) throw domain_error("QuadratureConfig: refinement limit must be >= 0");
    if (center) require_in_disk(*center, "QuadratureConfig.center");
  }
};

/// A (possibly astronomically large) norm carried as its logarithm.
struct NormEstimate {
  real log_value = kNegInf;
  bool resolved = false;
  std::string method;
  std::string diagnostic;

  real value() const { return std::exp(log_value); }
};

/// K^(k)_{m,lambda}(z) = (m~)_k conj(lambda)^k (1-|lambda|^2)^(m+1) / (1 - conj(lambda) z)^(m~ + k),
/// evaluated directly from the closed form (independently of kernel_jet).
inline cplx kernel_derivative(real m, cplx lambda, int k, cplx z, const SpaceParams& params) {
  require_in_disk(lambda, "kernel_derivative");
  require_in_disk(z, "kernel_derivative");
  if (k < 0) throw domain_error("kernel_derivative: k must be nonnegative");
  if (k > 0 && lambda == cplx{0}) return 0;
  const real shifted = m + 1 + params.shift();
  const cplx log_val = (m + 1) * std::log(one_minus_abs2(lambda)) -
                       (shifted + k) * std::log(cplx{1} - std::conj(lambda) * z);
  return pochhammer(shifted, static_cast<unsigned>(k)) * std::pow(std::conj(lambda), k) *
         std::exp(log_val);
}

namespace detail {

// log of sum over the tensor grid of exp(log_integrand(zeta)) against dA_alpha.
inline real log_disk_integral(const std::function<real(cplx)>& log_integrand, real alpha, int n_r,
                              int n_t) {
  const quad::Rule& rad = quad::radial_rule(n_r, alpha);
  const quad::Rule ang = quad::angular_rule(n_t, kPi / n_t);
  std::vector<real> terms;
  terms.reserve(static_cast<std::size_t>(n_r) * n_t);
  for (std::size_t i = 0; i < rad.nodes.size(); ++i) {
    const real r = std::sqrt(rad.nodes[i]);
    const real lw = std::log(rad.weights[i]) - std::log(real(n_t));
    for (std::size_t j = 0; j < ang.nodes.size(); ++j) {
      terms.push_back(lw + log_integrand(std::polar(r, ang.nodes[j])));
    }
  }
  return quad::log_sum_exp(terms);
}

inline real log_circle_mean(const std::function<real(cplx)>& log_integrand, real r, int n_t) {
  const quad::Rule ang = quad::angular_rule(n_t, kPi / n_t);
  std::vector<real> terms;
  terms.reserve(n_t);
  for (auto t : ang.nodes) terms.push_back(log_integrand(std::polar(r, t)) - std::log(real(n_t)));
  return quad::log_sum_exp(terms);
}

inline real log_abs_value(const AnalyticFn& f, cplx z) {
  const Jet j = f.jet(z, 0);
  if (j.is_zero()) return kNegInf;
  return std::log(std::abs(j.coefficients()[0])) + j.log_scale();
}

}  // namespace detail

/**
 * Norm of f in A^p_alpha by quadrature, in log domain.
 *
 * alpha > -1: tensor grid of Gauss-Jacobi nodes in t = r^2 (weight (1-t)^alpha)
 * and uniform angles, doubled until the norm changes by less than rel_tol.
 * alpha == -1: circle means at radii 1 - 2^-j. p == inf: sup over the same
 * circles. With cfg.center the integrand is pulled back by the disk
 * automorphism exchanging center and 0 (weight |phi'|^2 (1-|phi|^2)^alpha).
 */
inline NormEstimate norm(const AnalyticFn& f, const SpaceParams& params, const QuadratureConfig& cfg = {}) {
  params.validate();
  cfg.validate();
  const cplx c = cfg.center.value_or(cplx{0});
  const real lc = std::log(one_minus_abs2(c));
  const auto pulled_back = [&](cplx zeta) { return (c - zeta) / (cplx{1} - std::conj(c) * zeta); };
  // log of (1-|c|^2)/|1-conj(c) zeta|^2, i.e. log |phi'(zeta)|.
  const auto log_dphi = [&](cplx zeta) { return lc - 2 * std::log(std::abs(cplx{1} - std::conj(c) * zeta)); };

  NormEstimate out;
  if (params.sup_norm()) {
    out.method = "sup-circles";
    real prev = kNegInf;
    int n_t = cfg.angular;
    for (int j = 1; j <= 40; ++j) {
      const real r = 1 - std::ldexp(real(1), -j);
      real best = kNegInf;
      const quad::Rule ang = quad::angular_rule(n_t);
      for (auto t : ang.nodes) best = std::max(best, detail::log_abs_value(f, pulled_back(std::polar(r, t))));
      if (j > 4 && std::abs(best - prev) <= cfg.rel_tol) {
        out.log_value = best;
        out.resolved = true;
        return out;
      }
      prev = best;
      if (j % 4 == 0 && n_t < (cfg.angular << cfg.max_refinements)) n_t *= 2;
    }
    out.log_value = prev;
    out.diagnostic = "sup over circles did not settle";
    return out;
  }

  const real p = params.p;
  const auto log_integrand_area = [&](cplx zeta) {
    return p * detail::log_abs_value(f, pulled_back(zeta)) + (2 + params.alpha) * log_dphi(zeta);
  };

  if (params.hardy()) {
    out.method = "hardy-circle-means";
    const auto log_integrand_circle = [&](cplx zeta) {
      return p * detail::log_abs_value(f, pulled_back(zeta)) + log_dphi(zeta);
    };
    real prev = kNegInf;
    bool monotone = true;
    for (int j = 1; j <= 40; ++j) {
      const real r = 1 - std::ldexp(real(1), -j);
      // Resolve the circle mean itself by angular doubling.
      int n_t = cfg.angular;
      real mean = detail::log_circle_mean(log_integrand_circle, r, n_t);
      for (int k = 0; k < cfg.max_refinements + 4; ++k) {
        n_t *= 2;
        const real next = detail::log_circle_mean(log_integrand_circle, r, n_t);
        const bool done = std::abs(next - mean) <= p * cfg.rel_tol;
        mean = next;
        if (done) break;
      }
      if (mean < prev - 1e-12L) monotone = false;
      if (j > 2 && std::abs(mean - prev) <= p * cfg.rel_tol) {
        out.log_value = mean / p;
        out.resolved = true;
        if (!monotone) out.diagnostic = "circle means not monotone";
        return out;
      }
      prev = mean;
    }
    out.log_value = prev / p;
    out.diagnostic = std::string("circle means still changing at r = 1 - 2^-40") +
                     (monotone ? "" : "; not monotone");
    return out;
  }

  out.method = cfg.center ? "quadrature-recentered" : "quadrature";
  int n_r = cfg.radial;
  int n_t = cfg.angular;
  real prev = detail::log_disk_integral(log_integrand_area, params.alpha, n_r, n_t);
  for (int k = 0; k < cfg.max_refinements; ++k) {
    n_r *= 2;
    n_t *= 2;
    const real next = detail::log_disk_integral(log_integrand_area, params.alpha, n_r, n_t);
    const bool done = std::abs(next - prev) <= p * cfg.rel_tol;
    prev = next;
    if (done) {
      out.log_value = prev / p;
      out.resolved = true;
      return out;
    }
  }
  out.log_value = prev / p;
  out.diagnostic = "unresolved: refinement limit reached (" + std::to_string(n_r) + "x" +
                   std::to_string(n_t) + " nodes)";
  return out;
}

/**
 * Exact norm of K_{m,lambda} in A^p_alpha.
 *
 * ||K||^p = 2F1(a, a; 2+alpha; |lambda|^2) with a = (2 + alpha - p(m+1))/2, a
 * series of positive terms summed directly; as |lambda| -> 1 it increases to
 * Gamma(2+alpha) Gamma(p(m+1)) / Gamma((2+alpha+p(m+1))/2)^2, which is used
 * (flagged as a bound) when the series would need too many terms.
 */
inline NormEstimate kernel_norm(real m, cplx lambda, const SpaceParams& params) {
  params.validate();
  require_in_disk(lambda, "kernel_norm");
  NormEstimate out;
  const real r = std::abs(lambda);
  if (params.sup_norm()) {
    out.log_value = (m + 1) * std::log1p(r);
    out.resolved = true;
    out.method = "kernel-sup-exact";
    return out;
  }
  const real p = params.p;
  const real gamma = 2 + params.alpha;
  const real big_p = p * (m + 1);
  const real a = (gamma - big_p) / 2;
  const real log_limit = std::lgamma(gamma) + std::lgamma(big_p) - 2 * std::lgamma((gamma + big_p) / 2);
  const real x = r * r;
  constexpr real kMaxTerms = 4e7L;
  const real expected_terms = std::abs(a) + 60 / std::max<real>(1 - x, 1e-300L);
  if (x == 0) {
    out.log_value = 0;
    out.resolved = true;
    out.method = "kernel-series";
    return out;
  }
  if (expected_terms > kMaxTerms) {
    out.log_value = log_limit / p;
    out.resolved = false;
    out.method = "kernel-sup-bound";
    out.diagnostic = "series too long; reporting the |lambda| -> 1 limit (an upper bound)";
    return out;
  }
  real term = 1;
  real sum = 1;
  real log_rescale = 0;
  bool past_peak = false;
  for (real n = 0; n < kMaxTerms; n += 1) {
    const real ratio = (a + n) * (a + n) * x / ((gamma + n) * (n + 1));
    if (ratio == 0) break;  // a is a nonpositive integer: the series terminates
    if (ratio < 1) past_peak = true;
    term *= ratio;
    sum += term;
    if (past_peak && term < 1e-22L * sum) break;
    if (sum > 1e4000L) {
      sum *= 1e-4000L;
      term *= 1e-4000L;
      log_rescale += 4000 * std::log(real(10));
    }
  }
  out.log_value = (std::log(sum) + log_rescale) / p;
  out.resolved = true;
  out.method = "kernel-series";
  return out;
}

/// <f, K_z>_alpha in A^2_alpha with K_z(w) = (1 - conj(z) w)^-(2+alpha), by tensor quadrature.
/// Equals f(z) for f in A^2_alpha.
inline cplx reproducing_pairing(const AnalyticFn& f, cplx z, real alpha, int n_r = 64, int n_t = 64) {
  if (!(alpha > -1)) throw domain_error("reproducing_pairing: alpha must exceed -1");
  require_in_disk(z, "reproducing_pairing");
  const quad::Rule& rad = quad::radial_rule(n_r, alpha);
  const quad::Rule ang = quad::angular_rule(n_t);
  cplx acc = 0;
  for (std::size_t i = 0; i < rad.nodes.size(); ++i) {
    cplx ring = 0;
    for (auto th : ang.nodes) {
      const cplx w = std::polar(std::sqrt(rad.nodes[i]), th);
      ring += f(w) * std::conj(std::pow(cplx{1} - std::conj(z) * w, -(2 + alpha)));
    }
    acc += rad.weights[i] * ring / real(n_t);
  }
  return acc;
}

struct ForelliRudinCheck {
  real integral;
  real reference;  // (1 - |z|^2)^(-beta)
  real ratio;
  bool resolved;
};

namespace detail {

// Mean of g over |w| = r: nested trapezoid (offset nodes, doubling) while the
// integrand is resolved cheaply, then adaptive Gauss-Kronrod for kinks and
// narrow peaks.
template <class G>
real adaptive_circle_mean(const G& g, real r, real tol, bool& ok) {
  constexpr real kOffset = 0.0123456789L;
  const auto sample = [&](real theta) { return g(std::polar(r, theta)); };
  int n = 32;
  std::vector<real> v(n);
  for (int j = 0; j < n; ++j) v[j] = sample(kOffset + 2 * kPi * j / n);
  real prev = quad::pairwise_sum(v) / n;
  while (n < 8192) {
    for (int j = 0; j < n; ++j) v[j] = sample(kOffset + 2 * kPi * (j + real(0.5)) / n);
    const real next = (prev + quad::pairwise_sum(v) / n) / 2;
    n *= 2;
    v.resize(n);
    const bool done = std::abs(next - prev) <= tol * std::abs(next);
    prev = next;
    if (done) return prev;
  }
  real err = 0;
  const real val = boost::math::quadrature::gauss_kronrod<real, 15>::integrate(sample, real(0), 2 * kPi, 10, tol, &err);
  if (!(err <= tol * std::abs(val)) && !(err <= tol * std::abs(prev))) ok = false;
  return val / (2 * kPi);
}

}  // namespace detail

/// Quadrature of integral (1-|w|^2)^alpha / |1 - z conj(w)|^(2+alpha+beta) dA(w)
/// (dA normalized area) against its growth rate (1-|z|^2)^(-beta).
/// Radial Gauss-Jacobi nodes in t = |w|^2, adaptive trapezoid on each circle.
inline ForelliRudinCheck forelli_rudin_bound_check(real alpha, real beta, cplx z, real rel_tol = 1e-9L) {
  if (!(alpha > -1)) throw domain_error("forelli_rudin_bound_check: alpha must exceed -1");
  if (!(2 + alpha + beta > 0)) throw domain_error("forelli_rudin_bound_check: requires 2 + alpha + beta > 0");
  require_in_disk(z, "forelli_rudin_bound_check");
  const real expo = -(2 + alpha + beta);
  const auto g = [&](cplx w) { return std::pow(std::abs(cplx{1} - z * std::conj(w)), expo); };
  const auto integral = [&](int n_r, bool& ok) {
    const quad::Rule& rad = quad::radial_rule(n_r, alpha);
    std::vector<real> v(rad.nodes.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = rad.weights[i] * detail::adaptive_circle_mean(g, std::sqrt(rad.nodes[i]), rel_tol / 10, ok);
    return quad::pairwise_sum(v) / (1 + alpha);
  };
  bool ok = true;
  int n_r = 32;
  real prev = integral(n_r, ok);
  bool resolved = false;
  for (int k = 0; k < 6 && !resolved; ++k) {
    n_r *= 2;
    const real next = integral(n_r, ok);
    resolved = std::abs(next - prev) <= rel_tol * next;
    prev = next;
  }
  const real reference = std::pow(one_minus_abs2(z), -beta);
  return {prev, reference, prev / reference, resolved && ok};
}

/// Boundary variant: integral over the circle of |1 - z conj(w)|^-(1+beta) dm(w).
inline ForelliRudinCheck forelli_rudin_circle_check(real beta, cplx z, real rel_tol = 1e-10L) {
  if (!(1 + beta > 0)) throw domain_error("forelli_rudin_circle_check: requires 1 + beta > 0");
  require_in_disk(z, "forelli_rudin_circle_check");
  const auto log_integrand = [&](cplx w) { return -(1 + beta) * std::log(std::abs(cplx{1} - z * std::conj(w))); };
  int n_t = 64;
  real prev = detail::log_circle_mean(log_integrand, 1, n_t);
  bool resolved = false;
  for (int k = 0; k < 14 && !resolved; ++k) {
    n_t *= 2;
    const real next = detail::log_circle_mean(log_integrand, 1, n_t);
    resolved = std::abs(next - prev) <= rel_tol;
    prev = next;
  }
  const real reference = std::pow(one_minus_abs2(z), -beta);
  const real value = std::exp(prev);
  return {value, reference, value / reference, resolved};
}

}  // namespace bergman

#endif  // BERGMAN_BERGMAN_SPACE_HPP_
