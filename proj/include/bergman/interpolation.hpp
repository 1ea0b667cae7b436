#ifndef BERGMAN_INTERPOLATION_HPP_
#define BERGMAN_INTERPOLATION_HPP_

#include <optional>
#include <string>
#include <vector>

#include "bergman/analytic_fn.hpp"
#include "bergman/annihilator.hpp"
#include "bergman/bergman_space.hpp"
#include "bergman/m_sequence.hpp"
#include "bergman/small_linalg.hpp"

namespace bergman {

/// Points lambda_0..lambda_N (repetitions allowed), target index J, space (p, alpha).
struct InterpolationProblem {
  std::vector<cplx> points;
  int J = 0;
  SpaceParams params;

  int n() const { return static_cast<int>(points.size()) - 1; }

  void validate() const {
    params.validate();
    if (points.empty()) throw domain_error("InterpolationProblem: need at least one point");
    if (points.size() > kMaxJetOrder + 1) throw domain_error("InterpolationProblem: N exceeds the jet order cap");
    if (J < 0 || J > n()) throw domain_error("InterpolationProblem: J must lie in [0, N]");
    for (const cplx& p : points) require_in_disk(p, "InterpolationProblem");
  }

  /// log of the prescribed value (1 - |lambda_J|^2)^-((2+alpha)/p + J).
  real log_target() const { return -params.exponent(J) * std::log(one_minus_abs2(points[J])); }
};

enum class CaseTag { central, clustered, general };

inline std::string to_string(CaseTag c) {
  switch (c) {
    case CaseTag::central: return "central";
    case CaseTag::clustered: return "clustered";
    default: return "general";
  }
}

/// f^(k)(lambda_k) against the contract, in log domain.
struct JetCheck {
  std::size_t index = 0;
  real log_abs_value = kNegInf;
  real phase = 0;
  real error = 0;  // |f^(k) - target delta_kJ| / target
};

struct InterpolationOptions {
  MStrategy strategy = MStrategy::greedy;
  QuadratureConfig quadrature;
  bool estimate_norm = true;
  /// Largest kernel exponent for which norm quadrature is attempted.
  real quadrature_max_m = 64;
  real contract_tol = 1e-8L;
};

struct InterpolationResult {
  AnalyticFn f;
  CaseTag kind = CaseTag::central;
  real log_target = 0;
  std::optional<MSequence> m_seq;
  std::optional<Calibration> calibration;
  /// Polynomial coefficients (central) or kernel coefficients b_k (clustered).
  std::vector<cplx> coefficients;

  std::vector<real> gershgorin_margins;
  real log_abs_det = 0;
  real inverse_norm = 0;        // ||A^-1||
  real inverse_norm_bound = 0;  // ||A||^N / |det A| (clustered) or ||M||^N / prod n! (central)

  int pigeonhole_L = 0;
  std::vector<std::size_t> near, far;
  std::optional<Annihilator> annihilator;

  std::vector<JetCheck> jets;
  real max_contract_error = 0;
  bool contract_ok = false;

  NormEstimate norm;
};

namespace detail {

inline real log_abs_derivative(const AnalyticFn& f, cplx z, std::size_t k, real* phase) {
  const Jet j = f.jet(z, k);
  if (j.is_zero() || j.coefficients()[k] == cplx{0}) {
    *phase = 0;
    return kNegInf;
  }
  *phase = j.phase(k);
  return j.log_abs_derivative(k);
}

// p-triangle bound for a sum whose terms have the given log norms.
inline real log_sum_bound(const std::vector<real>& log_norms, real p) {
  const real q = (std::isinf(p) || p >= 1) ? real(1) : p;
  std::vector<real> scaled;
  for (real x : log_norms) scaled.push_back(q * x);
  return quad::log_sum_exp(scaled) / q;
}

}  // namespace detail

/// Checks f^(k)(lambda_k) = delta_kJ (1-|lambda_J|^2)^-((2+alpha)/p+J) at every point.
inline void verify_contract(const InterpolationProblem& pb, InterpolationResult& res, real tol) {
  res.log_target = pb.log_target();
  res.jets.clear();
  res.max_contract_error = 0;
  for (std::size_t k = 0; k < pb.points.size(); ++k) {
    JetCheck jc;
    jc.index = k;
    jc.log_abs_value = detail::log_abs_derivative(res.f, pb.points[k], k, &jc.phase);
    const real rel = std::exp(jc.log_abs_value - res.log_target);
    if (static_cast<int>(k) == pb.J) {
      jc.error = std::abs(std::polar(rel, jc.phase) - cplx{1});
    } else {
      jc.error = rel;
    }
    if (!std::isfinite(jc.error)) jc.error = kInf;
    res.max_contract_error = std::max(res.max_contract_error, jc.error);
    res.jets.push_back(jc);
  }
  res.contract_ok = res.max_contract_error <= tol;
}

/**
 * Central case: the polynomial p of degree <= N with p^(n)(lambda_n) = w_n,
 * from the upper-triangular system M_(n,k) = k!/(k-n)! lambda_n^(k-n) whose
 * determinant is D = prod n!.
 */
inline InterpolationResult interpolate_central(const InterpolationProblem& pb, const InterpolationOptions& opt = {}) {
  pb.validate();
  const std::size_t n = pb.points.size();
  ComplexMatrix m(n);
  real log_d = 0;
  for (std::size_t r = 0; r < n; ++r) {
    log_d += std::lgamma(real(r + 1));
    for (std::size_t k = r; k < n; ++k) {
      m(r, k) = std::exp(std::lgamma(real(k + 1)) - std::lgamma(real(k - r + 1))) *
                std::pow(pb.points[r], static_cast<int>(k - r));
    }
  }
  std::vector<cplx> w(n, cplx{0});
  w[pb.J] = std::exp(pb.log_target());
  InterpolationResult res;
  res.kind = CaseTag::central;
  res.coefficients = solve(m, w);
  res.f = AnalyticFn::polynomial(res.coefficients);
  const auto bound = inverse_norm_bound_check(m, std::exp(log_d));
  res.inverse_norm = bound.lhs;
  res.inverse_norm_bound = bound.rhs;
  res.log_abs_det = log_d;
  verify_contract(pb, res, opt.contract_tol);
  if (opt.estimate_norm) res.norm = norm(res.f, pb.params, opt.quadrature);
  return res;
}

/**
 * Clustered case: f = sum_k b_k m~_k^(1/2-k) K_(m_k, lambda_k) with A b = e_J,
 * a_jk = m~_k^(1/2-k) K^(j)_(m_k,lambda_k)(lambda_j) (1-|lambda_j|^2)^((2+alpha)/p+j).
 */
inline InterpolationResult interpolate_clustered(const InterpolationProblem& pb, const MSequence& seq,
                                                 const Calibration& cal, const InterpolationOptions& opt = {}) {
  pb.validate();
  const std::size_t n = pb.points.size();
  if (seq.size() != n) throw domain_error("interpolate_clustered: m-sequence length must be N+1");
  const cplx lj = pb.points[pb.J];
  if (!(std::abs(lj) > cal.R)) throw domain_error("interpolate_clustered: requires |lambda_J| > R");
  for (const cplx& p : pb.points)
    if (pseudo_distance(lj, p) > cal.epsilon)
      throw domain_error("interpolate_clustered: every point must lie within epsilon of lambda_J");

  const SpaceParams& sp = pb.params;
  std::vector<real> log_w(n);
  for (std::size_t k = 0; k < n; ++k) log_w[k] = (real(0.5) - real(k)) * std::log(seq.shifted[k]);

  ComplexMatrix a(n);
  for (std::size_t j = 0; j < n; ++j) {
    const real row_scale = sp.exponent(static_cast<int>(j)) * std::log(one_minus_abs2(pb.points[j]));
    for (std::size_t k = 0; k < n; ++k) {
      const Jet kj = kernel_jet(seq.m[k], pb.points[k], sp, pb.points[j], j);
      if (kj.is_zero() || kj.coefficients()[j] == cplx{0}) continue;
      const real log_mag = log_w[k] + kj.log_abs_derivative(j) + row_scale;
      if (log_mag > 11000) throw numeric_error("interpolate_clustered: matrix entry overflows");
      a(j, k) = std::polar(std::exp(log_mag), kj.phase(j));
    }
  }

  InterpolationResult res;
  res.kind = CaseTag::clustered;
  res.m_seq = seq;
  res.calibration = cal;
  const auto g = gershgorin_dominance(a);
  res.gershgorin_margins = g.margins;
  res.log_abs_det = g.log_abs_det;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(g.margins[j] > 0)) {
      throw numeric_error("interpolate_clustered: row " + std::to_string(j) +
                          " is not diagonally dominant (margin " + std::to_string(static_cast<double>(g.margins[j])) +
                          ")");
    }
  }
  std::vector<cplx> e(n, cplx{0});
  e[pb.J] = 1;
  res.coefficients = solve(a, e);
  const auto bound = inverse_norm_bound_check(a, std::exp(g.log_abs_det));
  res.inverse_norm = bound.lhs;
  res.inverse_norm_bound = bound.rhs;

  std::vector<AnalyticFn> terms;
  std::vector<real> log_term_norms;
  bool exact = true;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx coef = res.coefficients[k] * std::exp(log_w[k]);
    terms.push_back(AnalyticFn::scale(coef, AnalyticFn::kernel(seq.m[k], pb.points[k], sp)));
    if (opt.estimate_norm && coef != cplx{0}) {
      const auto kn = kernel_norm(seq.m[k], pb.points[k], sp);
      exact = exact && kn.resolved;
      log_term_norms.push_back(std::log(std::abs(coef)) + kn.log_value);
    }
  }
  res.f = AnalyticFn::sum(std::move(terms));
  verify_contract(pb, res, opt.contract_tol);

  if (opt.estimate_norm) {
    res.norm.log_value = detail::log_sum_bound(log_term_norms, sp.p);
    res.norm.method = "triangle-bound";
    res.norm.resolved = exact;
    if (!exact) res.norm.diagnostic = "kernel norms replaced by their |lambda| -> 1 limits";
    if (seq.m.back() <= opt.quadrature_max_m) {
      QuadratureConfig qc = opt.quadrature;
      qc.center = lj;
      const auto q = norm(res.f, sp, qc);
      if (q.resolved) res.norm = q;
    }
  }
  return res;
}

/**
 * Full construction: central when |lambda_J| <= R, clustered when every point
 * is within epsilon of lambda_J, otherwise the pigeonhole split: an empty
 * annulus L eps' < rho < (L+1) eps' (eps' = eps/(N+1), smallest L) separates
 * near points from far ones; g solves the clustered problem with far points
 * moved to lambda_J and h annihilates the far points, f = g h.
 */
inline InterpolationResult interpolate(const InterpolationProblem& pb, const InterpolationOptions& opt = {}) {
  pb.validate();
  const int n = pb.n();
  const auto seq = build_m_sequence(n, pb.params, opt.strategy);
  const auto margins = m_condition_margins(seq);
  for (std::size_t k = 0; k < margins.size(); ++k) {
    if (!(margins[k] > 0)) {
      throw numeric_error("interpolate: " + to_string(opt.strategy) + " m-sequence fails dominance row " +
                          std::to_string(k) + " (log margin " + std::to_string(static_cast<double>(margins[k])) + ")");
    }
  }
  const auto cal = calibrate(n, pb.params, seq);
  const cplx lj = pb.points[pb.J];
  if (std::abs(lj) <= cal.R) {
    auto res = interpolate_central(pb, opt);
    res.m_seq = seq;
    res.calibration = cal;
    return res;
  }
  std::vector<real> rho(pb.points.size());
  bool all_close = true;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    rho[k] = pseudo_distance(lj, pb.points[k]);
    all_close = all_close && rho[k] <= cal.epsilon;
  }
  if (all_close) return interpolate_clustered(pb, seq, cal, opt);

  const real eps1 = cal.epsilon / (n + 1);
  int L = 0;
  for (int l = 1; l <= n + 1 && L == 0; ++l) {
    bool empty = true;
    for (real r : rho) empty = empty && !(r > l * eps1 && r < (l + 1) * eps1);
    if (empty) L = l;
  }
  if (L == 0) throw numeric_error("interpolate: no empty annulus (pigeonhole failed)");

  InterpolationProblem sub = pb;
  std::vector<std::size_t> near, far;
  std::vector<cplx> cluster{lj}, far_pts;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    if (rho[k] <= L * eps1) {
      near.push_back(k);
      if (static_cast<int>(k) != pb.J) cluster.push_back(pb.points[k]);
    } else {
      far.push_back(k);
      far_pts.push_back(pb.points[k]);
      sub.points[k] = lj;
    }
  }
  InterpolationOptions sub_opt = opt;
  auto g = interpolate_clustered(sub, seq, cal, sub_opt);
  const real c = real(L + 1) / L;
  auto h = build_annihilator(cluster, far_pts, n, c, L * eps1);

  InterpolationResult res = g;
  res.kind = CaseTag::general;
  res.pigeonhole_L = L;
  res.near = near;
  res.far = far;
  res.f = AnalyticFn::product({g.f, h.fn});
  res.annihilator = h;
  verify_contract(pb, res, opt.contract_tol);
  if (opt.estimate_norm) {
    res.norm.log_value = g.norm.log_value + std::log(h.sup_estimate);
    res.norm.method = "annihilator-product-bound";
    res.norm.resolved = g.norm.resolved;
  }
  return res;
}

/// log max |f| over |z| = r (the maximum over |z| <= r), sampled.
inline real log_max_modulus(const AnalyticFn& f, real r, int samples = 512) {
  real best = kNegInf;
  for (int j = 0; j < samples; ++j) best = std::max(best, detail::log_abs_value(f, std::polar(r, 2 * kPi * j / samples)));
  return best;
}

}  // namespace bergman

#endif  // BERGMAN_INTERPOLATION_HPP_
