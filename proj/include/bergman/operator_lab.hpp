#ifndef BERGMAN_OPERATOR_LAB_HPP_
#define BERGMAN_OPERATOR_LAB_HPP_

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "bergman/analytic_fn.hpp"
#include "bergman/bergman_space.hpp"
#include "bergman/interpolation.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

class self_map_error : public domain_error {
 public:
  using domain_error::domain_error;
};

enum class Verdict { yes, no, inconclusive, vacuous_true };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::vacuous_true: return "vacuous-true";
    default: return "inconclusive";
  }
}

/// u . (f^(k) o phi).
struct SymbolPair {
  AnalyticFn u;
  AnalyticFn phi;
  int k = 0;
};

/// T f = sum_k u_k (f^(k) o phi_k) from A^p_alpha into A^q_beta (or H^inf when target is empty).
struct OperatorSpec {
  std::vector<SymbolPair> pairs;
  SpaceParams source;
  std::optional<SpaceParams> target;

  void validate() const {
    source.validate();
    if (target) target->validate();
    if (pairs.empty()) throw domain_error("OperatorSpec: need at least one symbol pair");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (pairs[i].k < 0 || static_cast<std::size_t>(pairs[i].k) > kMaxJetOrder)
        throw domain_error("OperatorSpec: derivative order out of range");
      for (std::size_t j = 0; j < i; ++j)
        if (pairs[i].k == pairs[j].k) throw domain_error("OperatorSpec: derivative orders must be distinct");
    }
  }
};

/// Samples |phi| on nested circles r_j = 1 - 2^-j and rejects maps leaving the disk.
inline void validate_self_map(const AnalyticFn& phi, real tol = 1e-12L) {
  for (int j = 0; j <= 30; ++j) {
    const real r = j == 0 ? real(0) : 1 - std::ldexp(real(1), -j);
    const int m = j == 0 ? 1 : 256;
    for (int t = 0; t < m; ++t) {
      const cplx z = std::polar(r, 2 * kPi * t / m);
      real mod;
      try {
        mod = std::abs(phi(z));
      } catch (const numeric_error& e) {
        throw self_map_error(std::string("self-map check: evaluation failed: ") + e.what());
      }
      if (!(mod < 1 - tol) && !(mod < 1 && r < 1 - 1e-6L)) {
        throw self_map_error("self-map check: |phi(z)| = " + std::to_string(static_cast<double>(mod)) +
                             " at |z| = " + std::to_string(static_cast<double>(r)));
      }
    }
  }
}

/// sum_k u_k(z) f^(k)(phi_k(z)).
inline cplx apply(const OperatorSpec& spec, const AnalyticFn& f, cplx z) {
  require_in_disk(z, "apply");
  cplx acc = 0;
  for (const auto& pr : spec.pairs) {
    const cplx w = pr.phi(z);
    if (!(std::abs(w) < 1)) throw domain_error("apply: phi(z) lies outside the open unit disk");
    acc += pr.u(z) * f.jet(w, pr.k).derivative(pr.k);
  }
  return acc;
}

struct OrderBoundedReport {
  Verdict verdict = Verdict::inconclusive;
  real value = kNaN;            // integral (convergent)
  real growth_exponent = kNaN;  // gamma in partial ~ (1-r)^-gamma (divergent); 0 means logarithmic
  std::vector<real> radii;      // shell outer radii
  std::vector<real> partials;   // partial integrals over |z| < r_j
  std::string diagnostic;
};

namespace detail {

// Integral of F over the annulus a <= |z| < b against dA_beta, adaptive in angle.
template <class F>
real shell_integral(const F& f, real beta, real a, real b, int n_r, bool& resolved) {
  const quad::Rule rad = quad::gauss_legendre(n_r, a, b);
  real total = 0;
  for (std::size_t i = 0; i < rad.nodes.size(); ++i) {
    const real r = rad.nodes[i];
    const real w = rad.weights[i] * (1 + beta) * std::pow(one_minus_abs2(r), beta) * 2 * r;
    bool ok = true;
    total += w * adaptive_circle_mean(f, r, 1e-10L, ok);
    resolved = resolved && ok;
  }
  return total;
}

}  // namespace detail

/**
 * integral |u|^q / (1 - |phi|^2)^((2+alpha)q/p + kq) dA_beta over shells
 * r_j = 1 - 2^-j. Shell increments behave like 2^(gamma j). Increments with
 * ratio below 0.97 give a value plus a geometric tail; gamma >= -0.005 over the
 * window gives "divergent" once two consecutive windows agree on gamma (gamma ~ 0
 * is logarithmic); anything in between is inconclusive.
 */
inline OrderBoundedReport order_bounded_integral(const SymbolPair& pair, const SpaceParams& source,
                                                 const SpaceParams& target, const QuadratureConfig& cfg = {}) {
  source.validate();
  target.validate();
  if (source.sup_norm() || target.sup_norm()) throw domain_error("order_bounded_integral: requires finite p and q");
  if (!(target.alpha > -1)) throw domain_error("order_bounded_integral: target weight must exceed -1");
  cfg.validate();
  const real q = target.p;
  const real s = (2 + source.alpha) * q / source.p + pair.k * q;
  const auto integrand = [&](cplx z) -> real {
    const real lu = detail::log_abs_value(pair.u, z);
    const cplx w = pair.phi(z);
    if (!(std::abs(w) < 1)) throw domain_error("order_bounded_integral: phi leaves the disk");
    return std::exp(q * lu - s * std::log(one_minus_abs2(w)));
  };

  OrderBoundedReport rep;
  std::vector<real> inc;
  real total = 0;
  real prev_gamma = kNaN;
  bool all_resolved = true;
  constexpr int kShells = 48;
  constexpr int kWindow = 6;
  const int n_r = std::max(16, cfg.radial / 2);
  for (int j = 1; j <= kShells; ++j) {
    const real a = j == 1 ? real(0) : 1 - std::ldexp(real(1), -(j - 1));
    const real b = 1 - std::ldexp(real(1), -j);
    bool ok = true;
    const real d = detail::shell_integral(integrand, target.alpha, a, b, n_r, ok);
    all_resolved = all_resolved && ok;
    inc.push_back(d);
    total += d;
    rep.radii.push_back(b);
    rep.partials.push_back(total);
    if (!std::isfinite(total)) {
      rep.verdict = Verdict::no;
      rep.growth_exponent = kInf;
      rep.diagnostic = "partial integral overflowed";
      return rep;
    }
    if (j < kWindow + 2) continue;
    real lo = kInf, hi = 0, log_sum = 0;
    bool positive = true;
    for (int t = j - kWindow; t < j; ++t) {
      if (!(inc[t - 1] > 0)) {
        positive = false;
        break;
      }
      const real ratio = inc[t] / inc[t - 1];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      log_sum += std::log2(ratio);
    }
    if (total == 0) {
      rep.verdict = Verdict::yes;
      rep.value = 0;
      return rep;
    }
    if (!positive) {
      // Increments vanish identically from some shell on: the integral is finite.
      rep.verdict = Verdict::yes;
      rep.value = total;
      return rep;
    }
    if (hi < 0.97L) {
      const real tail = inc.back() * hi / (1 - hi);
      if (tail <= cfg.rel_tol * total || j == kShells) {
        rep.verdict = Verdict::yes;
        rep.value = total + inc.back() * (inc.back() / inc[inc.size() - 2]) /
                                (1 - inc.back() / inc[inc.size() - 2]);
        if (!all_resolved) rep.diagnostic = "some shells hit the angular refinement cap";
        return rep;
      }
    } else if (lo >= std::exp2(real(-0.005))) {
      const real gamma = std::max<real>(0, log_sum / kWindow);
      if (std::abs(gamma - prev_gamma) < 0.005L || j == kShells) {
        rep.verdict = Verdict::no;
        rep.growth_exponent = gamma;
        rep.diagnostic = gamma < 0.05L ? "increments plateau: logarithmic divergence"
                                       : "partial integrals grow like (1-r)^-gamma";
        return rep;
      }
      prev_gamma = gamma;
      continue;
    }
    prev_gamma = kNaN;
  }
  rep.verdict = Verdict::inconclusive;
  rep.diagnostic = "shell increments neither settled nor grew within the shell budget";
  return rep;
}

struct OrderBoundedCheck {
  std::vector<OrderBoundedReport> pairs;
  Verdict overall = Verdict::inconclusive;
};

/// Order boundedness of the sum: the conjunction of the per-pair integral conditions.
inline OrderBoundedCheck check_order_bounded(const OperatorSpec& spec, const QuadratureConfig& cfg = {}) {
  spec.validate();
  if (!spec.target || !(spec.target->alpha > -1))
    throw domain_error("check_order_bounded: target must be a weighted Bergman space (beta > -1)");
  OrderBoundedCheck out;
  bool any_no = false, any_inconclusive = false;
  for (const auto& pr : spec.pairs) {
    validate_self_map(pr.phi);
    out.pairs.push_back(order_bounded_integral(pr, spec.source, *spec.target, cfg));
    any_no = any_no || out.pairs.back().verdict == Verdict::no;
    any_inconclusive = any_inconclusive || out.pairs.back().verdict == Verdict::inconclusive;
  }
  out.overall = any_no ? Verdict::no : any_inconclusive ? Verdict::inconclusive : Verdict::yes;
  return out;
}

struct ProfileRow {
  real threshold;  // t_i
  real sup_ratio;  // sup of the ratio over samples with |phi| >= t_i
  std::size_t samples;
};

struct CompactnessProfile {
  std::vector<ProfileRow> rows;
  real sup_phi = 0;
  Verdict u_bounded = Verdict::inconclusive;
  Verdict limit_zero = Verdict::inconclusive;  // yes | no | vacuous-true | inconclusive
  Verdict compact = Verdict::inconclusive;
  real sup_u = 0;
  /// Per band t_i <= |phi| < t_(i+1), the sample with the largest ratio.
  std::vector<cplx> witnesses;
  std::string diagnostic;
};

namespace detail {

struct ProfileSample {
  cplx z;
  real phi_mod;
  real log_ratio;
};

}  // namespace detail

/**
 * Samples |u(z)| / (1 - |phi(z)|^2)^((2+alpha)/p + k) on circles r_j = 1 - 2^-j
 * (with angular refinement around the largest |phi| on each circle) and
 * reports s_i = sup{ratio : |phi(z)| >= t_i}, t_i = 1 - 2^-i.
 */
inline CompactnessProfile compactness_profile(const SymbolPair& pair, const SpaceParams& source) {
  source.validate();
  validate_self_map(pair.phi);
  const real e = source.shift() + pair.k;
  constexpr int kCircles = 40;
  constexpr int kAngles = 512;
  std::vector<detail::ProfileSample> samples;
  std::vector<real> circle_sup_u;
  CompactnessProfile prof;

  const auto take = [&](cplx z, real& best_phi, real& best_t, real t, real& max_u) {
    const real pm = std::abs(pair.phi(z));
    const real lu = detail::log_abs_value(pair.u, z);
    samples.push_back({z, pm, lu - e * std::log(std::max<real>(one_minus_abs2(pm), 1e-4900L))});
    max_u = std::max(max_u, std::exp(lu));
    if (pm > best_phi) {
      best_phi = pm;
      best_t = t;
    }
  };

  for (int j = 0; j <= kCircles; ++j) {
    const real r = j == 0 ? real(0) : 1 - std::ldexp(real(1), -j);
    real best_phi = -1, best_t = 0, max_u = 0;
    const int m = j == 0 ? 1 : kAngles;
    for (int t = 0; t < m; ++t) {
      const real th = 2 * kPi * t / m;
      take(std::polar(r, th), best_phi, best_t, th, max_u);
    }
    // Zoom in around the angle of largest |phi|.
    real width = 2 * kPi / m;
    for (int level = 0; level < 6 && j > 0; ++level) {
      const real centre = best_t;
      for (int t = -16; t <= 16; ++t) {
        const real th = centre + width * t / 16;
        take(std::polar(r, th), best_phi, best_t, th, max_u);
      }
      width /= 8;
    }
    circle_sup_u.push_back(max_u);
  }

  for (const auto& s : samples) prof.sup_phi = std::max(prof.sup_phi, s.phi_mod);
  prof.sup_u = circle_sup_u.back();

  // u bounded: the circle maxima settle.
  const std::size_t nc = circle_sup_u.size();
  const real late = circle_sup_u[nc - 1], earlier = circle_sup_u[nc - 6];
  if (!std::isfinite(late) || late > 1e12L * std::max<real>(circle_sup_u[1], 1)) {
    prof.u_bounded = Verdict::no;
  } else if (late <= earlier * (1 + 1e-3L)) {
    prof.u_bounded = Verdict::yes;
  } else if (circle_sup_u[nc - 1] / circle_sup_u[nc - 2] > 1.2L && circle_sup_u[nc - 2] / circle_sup_u[nc - 3] > 1.2L) {
    prof.u_bounded = Verdict::no;
  } else {
    prof.u_bounded = Verdict::inconclusive;
  }

  if (1 - prof.sup_phi > 1e-6L) {
    prof.limit_zero = Verdict::vacuous_true;
    prof.diagnostic = "sup |phi| = " + std::to_string(static_cast<double>(prof.sup_phi)) + " < 1";
  } else {
    for (int i = 1; i <= 36; ++i) {
      const real t = 1 - std::ldexp(real(1), -i);
      const real t_next = 1 - std::ldexp(real(1), -(i + 1));
      ProfileRow row{t, 0, 0};
      real best = kNegInf, band_best = kNegInf;
      cplx wit = 0;
      for (const auto& s : samples) {
        if (s.phi_mod < t) continue;
        ++row.samples;
        best = std::max(best, s.log_ratio);
        if (s.phi_mod < t_next && s.log_ratio > band_best) {
          band_best = s.log_ratio;
          wit = s.z;
        }
      }
      if (row.samples == 0) break;
      row.sup_ratio = std::exp(best);
      prof.rows.push_back(row);
      if (band_best > kNegInf) prof.witnesses.push_back(wit);
    }
    const std::size_t nr = prof.rows.size();
    if (nr < 8) {
      prof.limit_zero = Verdict::inconclusive;
      prof.diagnostic = "too few thresholds reached";
    } else {
      const real first = prof.rows[nr / 2].sup_ratio, last = prof.rows[nr - 1].sup_ratio;
      bool nonincreasing = true;
      for (std::size_t i = nr / 2 + 1; i < nr; ++i)
        nonincreasing = nonincreasing && prof.rows[i].sup_ratio <= prof.rows[i - 1].sup_ratio * (1 + 1e-9L);
      // Least-squares slope of log2 s_i against i over the upper half.
      real sx = 0, sy = 0, sxx = 0, sxy = 0;
      const real cnt = real(nr - nr / 2);
      for (std::size_t i = nr / 2; i < nr; ++i) {
        const real y = std::log2(prof.rows[i].sup_ratio);
        sx += i;
        sy += y;
        sxx += real(i) * i;
        sxy += i * y;
      }
      const real slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
      if (last <= 1e-8L || (nonincreasing && slope <= -0.1L && last <= 0.1L * first)) {
        prof.limit_zero = Verdict::yes;
      } else if (last >= 0.5L * first) {
        prof.limit_zero = Verdict::no;
      } else {
        prof.limit_zero = Verdict::inconclusive;
        prof.diagnostic = "ratio decreasing too slowly to decide";
      }
    }
  }

  if (prof.u_bounded == Verdict::no || prof.limit_zero == Verdict::no) {
    prof.compact = Verdict::no;
  } else if (prof.u_bounded == Verdict::yes &&
             (prof.limit_zero == Verdict::yes || prof.limit_zero == Verdict::vacuous_true)) {
    prof.compact = Verdict::yes;
  } else {
    prof.compact = Verdict::inconclusive;
  }
  return prof;
}

struct CompactnessCheck {
  std::vector<CompactnessProfile> pairs;
  Verdict overall = Verdict::inconclusive;
};

/// Compactness into H^inf: every pair must satisfy the weight and limit conditions.
inline CompactnessCheck check_compact(const OperatorSpec& spec) {
  spec.validate();
  CompactnessCheck out;
  bool any_no = false, any_inconclusive = false;
  for (const auto& pr : spec.pairs) {
    out.pairs.push_back(compactness_profile(pr, spec.source));
    any_no = any_no || out.pairs.back().compact == Verdict::no;
    any_inconclusive = any_inconclusive || out.pairs.back().compact == Verdict::inconclusive;
  }
  out.overall = any_no ? Verdict::no : any_inconclusive ? Verdict::inconclusive : Verdict::yes;
  return out;
}

struct SequenceCheck {
  Verdict compact_verdict = Verdict::inconclusive;
  std::string mode;
  std::vector<real> parameters;  // |lambda_j| or |phi(z_j)|
  std::vector<real> log_values;  // log of the tested quantity along the sequence
  bool consistent = false;
};

namespace detail {

// log sup |T f| over circles up to 1 - 2^-30, with refinement near the largest value.
inline real log_sup_apply(const OperatorSpec& spec, const AnalyticFn& f) {
  real best = kNegInf;
  for (int j = 0; j <= 30; ++j) {
    const real r = j == 0 ? real(0) : 1 - std::ldexp(real(1), -j);
    const int m = j == 0 ? 1 : 256;
    real best_t = 0, best_here = kNegInf;
    for (int t = 0; t < m; ++t) {
      const real th = 2 * kPi * t / m;
      const real v = std::log(std::abs(apply(spec, f, std::polar(r, th))));
      if (v > best_here) {
        best_here = v;
        best_t = th;
      }
    }
    real width = 2 * kPi / m;
    for (int level = 0; level < 4 && j > 0; ++level) {
      const real centre = best_t;
      for (int t = -8; t <= 8; ++t) {
        const real th = centre + width * t / 8;
        const real v = std::log(std::abs(apply(spec, f, std::polar(r, th))));
        if (v > best_here) {
          best_here = v;
          best_t = th;
        }
      }
      width /= 8;
    }
    best = std::max(best, best_here);
  }
  return best;
}

}  // namespace detail

/**
 * Cross-checks the compactness verdict against test sequences.
 *
 * Judged compact: f_j = K_(0, lambda_j)/||K_(0, lambda_j)||, |lambda_j| -> 1 (bounded,
 * tending to 0 on compacts) must give sup |T f_j| -> 0.
 * Judged not compact because of the limit condition: at witnesses z_j with
 * |phi_k(z_j)| -> 1, the interpolating functions with f^(i)(phi_i(z_j)) =
 * delta_ik (1 - |phi_k(z_j)|^2)^-((2+alpha)/p+k) give |T f_j(z_j)| / ||f_j||
 * bounded away from 0. Judged not compact because u_k is unbounded: the
 * monomial z^k/k! gives sup |T f| = sup |u_k| = infinity.
 */
inline SequenceCheck sequence_criterion_check(const OperatorSpec& spec, const InterpolationOptions& opt = {}) {
  const auto cc = check_compact(spec);
  SequenceCheck out;
  out.compact_verdict = cc.overall;
  const SpaceParams& sp = spec.source;
  if (cc.overall == Verdict::yes) {
    out.mode = "kernel-sequence";
    real worst_first = kNegInf, worst_last = kNegInf;
    for (const real t : {0.9L, 0.99L, 0.999L, 0.9999L}) {
      real best = kNegInf;
      for (int d = 0; d < 4; ++d) {
        const cplx lam = std::polar(t, kPi * d / 2);
        const auto f = AnalyticFn::kernel(0, lam, sp);
        best = std::max(best, detail::log_sup_apply(spec, f) - kernel_norm(0, lam, sp).log_value);
      }
      out.parameters.push_back(t);
      out.log_values.push_back(best);
      if (worst_first == kNegInf) worst_first = best;
      worst_last = best;
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < out.log_values.size(); ++i)
      decreasing = decreasing && out.log_values[i] <= out.log_values[i - 1] + 1e-9L;
    out.consistent = decreasing && worst_last <= worst_first + std::log(real(0.1));
    return out;
  }
  if (cc.overall != Verdict::no) {
    out.mode = "undecided";
    out.consistent = true;
    return out;
  }
  // Locate a failing pair.
  std::size_t idx = 0;
  while (cc.pairs[idx].compact != Verdict::no) ++idx;
  const auto& prof = cc.pairs[idx];
  const SymbolPair& pr = spec.pairs[idx];
  if (prof.u_bounded == Verdict::no) {
    out.mode = "unbounded-weight";
    std::vector<cplx> mono(pr.k + 1, cplx{0});
    mono[pr.k] = std::exp(-std::lgamma(real(pr.k + 1)));
    const auto f = AnalyticFn::polynomial(mono);
    for (int j : {4, 8, 12, 16}) {
      const real r = 1 - std::ldexp(real(1), -j);
      real best = kNegInf;
      for (int t = 0; t < 256; ++t) best = std::max(best, std::log(std::abs(apply(spec, f, std::polar(r, 2 * kPi * t / 256)))));
      out.parameters.push_back(r);
      out.log_values.push_back(best);
    }
    out.consistent = out.log_values.back() > out.log_values.front() + std::log(real(10));
    return out;
  }
  out.mode = "interpolation-witness";
  int n = 0;
  for (const auto& p : spec.pairs) n = std::max(n, p.k);
  const std::size_t nw = prof.witnesses.size();
  for (std::size_t i = nw / 2; i < nw; i += std::max<std::size_t>(1, (nw - nw / 2) / 4)) {
    const cplx zj = prof.witnesses[i];
    InterpolationProblem pb;
    pb.params = sp;
    pb.J = pr.k;
    const cplx lam_k = pr.phi(zj);
    pb.points.assign(n + 1, lam_k);
    for (const auto& p : spec.pairs) pb.points[p.k] = p.phi(zj);
    auto res = interpolate(pb, opt);
    const cplx tv = apply(spec, res.f, zj);
    out.parameters.push_back(std::abs(lam_k));
    out.log_values.push_back(std::log(std::abs(tv)) - res.norm.log_value);
  }
  out.consistent = !out.log_values.empty() && out.log_values.back() >= out.log_values.front() + std::log(real(0.1));
  return out;
}

struct GrowthProbe {
  real log_achieved;   // log |f^(n)(z)| / ||f||
  real log_reference;  // log (1-|z|^2)^-((2+alpha)/p+n)
  real ratio;
  CaseTag kind;
  std::string norm_method;
};

/// The N = n interpolant with every point at z and J = n, scaled to unit norm.
inline GrowthProbe growth_bound_probe(cplx z, int n, const SpaceParams& source, const InterpolationOptions& opt = {}) {
  require_in_disk(z, "growth_bound_probe");
  if (n < 0) throw domain_error("growth_bound_probe: n must be nonnegative");
  InterpolationProblem pb;
  pb.params = source;
  pb.J = n;
  pb.points.assign(n + 1, z);
  const auto res = interpolate(pb, opt);
  GrowthProbe g;
  g.log_reference = pb.log_target();
  g.log_achieved = res.jets[n].log_abs_value - res.norm.log_value;
  g.ratio = std::exp(g.log_achieved - g.log_reference);
  g.kind = res.kind;
  g.norm_method = res.norm.method;
  return g;
}

}  // namespace bergman

#endif  // BERGMAN_OPERATOR_LAB_HPP_
