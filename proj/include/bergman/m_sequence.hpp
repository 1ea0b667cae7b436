#ifndef BERGMAN_M_SEQUENCE_HPP_
#define BERGMAN_M_SEQUENCE_HPP_

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "bergman/core.hpp"
#include "bergman/disk_geometry.hpp"
#include "bergman/space_params.hpp"

namespace bergman {

enum class MStrategy { paper, greedy };

inline std::string to_string(MStrategy s) { return s == MStrategy::paper ? "paper" : "greedy"; }

inline MStrategy parse_strategy(const std::string& s) {
  if (s == "paper") return MStrategy::paper;
  if (s == "greedy") return MStrategy::greedy;
  throw domain_error("unknown m-sequence strategy '" + s + "'");
}

/// Kernel exponents m_0 < ... < m_N (integer valued, possibly far beyond 2^64)
/// and their shifted values m~_k = m_k + 1 + (2+alpha)/p.
struct MSequence {
  std::vector<real> m;
  std::vector<real> shifted;
  MStrategy strategy = MStrategy::greedy;
  SpaceParams params;

  std::size_t size() const { return m.size(); }
};

namespace detail {

// log of (m~)_k m~^(1/2 - j).
inline real log_weight_term(real shifted, int k, int j) {
  return log_pochhammer(shifted, k) + (real(0.5) - j) * std::log(shifted);
}

// Row k of the dominance condition restricted to the first `count` exponents:
// log[(1/2)(m~_k)_k m~_k^(1/2-k)] - log[1 + 2 sum_{j != k} (m~_j)_k m~_j^(1/2-j)].
inline real row_margin(const std::vector<real>& shifted, std::size_t count, int k) {
  const real lhs = std::log(real(0.5)) + log_weight_term(shifted[k], k, k);
  real rhs = 0;  // log 1
  for (std::size_t j = 0; j < count; ++j) {
    if (static_cast<int>(j) == k) continue;
    rhs = log_add(rhs, std::log(real(2)) + log_weight_term(shifted[j], k, static_cast<int>(j)));
  }
  return lhs - rhs;
}

}  // namespace detail

/// Per-row logarithmic margins of
/// (1/2)(m~_k)_k m~_k^(1/2-k) > 1 + 2 sum_{j != k} (m~_j)_k m~_j^(1/2-j).
inline std::vector<real> m_condition_margins(const MSequence& s) {
  std::vector<real> out(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) out[k] = detail::row_margin(s.shifted, s.size(), static_cast<int>(k));
  return out;
}

inline bool m_condition_holds(const MSequence& s) {
  for (real x : m_condition_margins(s))
    if (!(x > 0)) return false;
  return true;
}

namespace detail {

inline void check_representable(real m, std::size_t k) {
  if (!std::isfinite(m) || !std::isfinite(std::log(m)) || m > 1e4000L) {
    throw numeric_error("build_m_sequence: m_" + std::to_string(k) + " exceeds the representable range");
  }
}

inline MSequence paper_sequence(int n, const SpaceParams& params) {
  MSequence s;
  s.strategy = MStrategy::paper;
  s.params = params;
  const real e = params.shift();
  s.m.push_back(n + 1);
  s.shifted.push_back(n + 1 + 1 + e);
  for (int k = 1; k <= n; ++k) {
    const real base = std::ldexp(real(n + 1), n + 2) + std::ldexp(real(k), k + 2) * std::pow(s.shifted.back(), real(0.5) + k);
    const real mk = std::round(base * base);
    check_representable(mk, k);
    s.m.push_back(mk);
    s.shifted.push_back(mk + 1 + e);
  }
  return s;
}

// Smallest representable integer m >= lo with pred(m), for pred that may fail
// on an initial stretch but holds from some point on. A short linear scan
// handles small exponents; beyond it, exponential search then bisection.
inline real smallest_integer_with(real lo, const std::function<bool(real)>& pred) {
  constexpr int kScan = 4096;
  for (int i = 0; i < kScan; ++i) {
    if (pred(lo + i)) return lo + i;
  }
  real bad = lo + kScan - 1;
  real step = kScan;
  real good = bad + step;
  while (!pred(good)) {
    bad = good;
    step *= 2;
    good = bad + step;
    check_representable(good, 0);
  }
  // Invariant: pred(bad) false, pred(good) true.
  while (true) {
    const real mid = std::floor(bad + (good - bad) / 2);
    if (mid <= bad || mid >= good) break;
    (pred(mid) ? good : bad) = mid;
  }
  return good;
}

inline MSequence greedy_sequence(int n, const SpaceParams& params) {
  MSequence s;
  s.strategy = MStrategy::greedy;
  s.params = params;
  const real e = params.shift();
  for (int k = 0; k <= n; ++k) {
    const real lo = k == 0 ? real(n + 1) : s.m.back() + 1;
    s.m.push_back(lo);
    s.shifted.push_back(lo + 1 + e);
    const auto pred = [&](real mk) {
      s.m[k] = mk;
      s.shifted[k] = mk + 1 + e;
      for (int i = 0; i <= k; ++i)
        if (!(detail::row_margin(s.shifted, k + 1, i) > 0)) return false;
      return true;
    };
    const real mk = smallest_integer_with(lo, pred);
    check_representable(mk, k);
    s.m[k] = mk;
    s.shifted[k] = mk + 1 + e;
  }
  return s;
}

}  // namespace detail

/**
 * Kernel exponents for the clustered construction.
 *
 * paper: m_0 = N+1, m_k = (2^(N+2)(N+1) + 2^(k+2) k m~_(k-1)^(1/2+k))^2.
 * greedy: for k = 0..N the smallest integer m_k > m_(k-1) (m_0 >= N+1) such
 * that rows 0..k of the dominance condition hold with the exponents chosen so
 * far. Later exponents only shrink the earlier rows' right-hand sides in the
 * limit, so the final sequence satisfies every row.
 */
inline MSequence build_m_sequence(int n, const SpaceParams& params, MStrategy strategy) {
  if (n < 0) throw domain_error("build_m_sequence: N must be nonnegative");
  params.validate();
  return strategy == MStrategy::paper ? detail::paper_sequence(n, params) : detail::greedy_sequence(n, params);
}

/// Radius R and pseudo-hyperbolic scale epsilon for the clustered case.
struct Calibration {
  real R = 0.5L;
  real epsilon = 0;
  real exponent = 0;  // E = m~_N + N + 2
  int halvings = 0;   // epsilon reductions forced by sampled verification
  std::size_t samples = 0;
};

/// r with (1 + 8r)^E = 2^(1/2).
inline real one_sided_radius(real exponent) {
  return std::expm1(std::log(real(2)) / (2 * exponent)) / 8;
}

/// r with ((1 + 8r)/(1 - 8r))^E = 2^(1/2): both ratio bounds then hold two-sided.
inline real two_sided_radius(real exponent) {
  const real q = std::expm1(std::log(real(2)) / (2 * exponent));  // 2^(1/(2E)) - 1
  return q / (q + 2) / 8;
}

namespace detail {

struct RatioSample {
  bool ok;
  real worst;  // largest E |log ratio| seen, compared against log(2)/2
};

// Ratios for z and w = phi_z(zeta), |zeta| = rho: with t = conj(z) zeta,
// (1-|z|^2)/(1-|w|^2) = |1-t|^2/(1-|zeta|^2) and |1 - conj(w) z|/(1-|z|^2) = 1/|1-t|.
inline RatioSample ratio_sample(cplx z, cplx zeta, real exponent, int n) {
  const real log_one_minus_t = bergman::log1p(-std::conj(z) * zeta).real();
  const real r1 = 2 * log_one_minus_t - std::log1p(-std::norm(zeta));
  const real r2 = -log_one_minus_t;
  const real half_log2 = std::log(real(2)) / 2;
  const real worst = exponent * std::max(std::abs(r1), std::abs(r2));
  bool ok = worst < half_log2;
  if (n > 0) {
    const cplx w = (z - zeta) / (cplx{1} - std::conj(z) * zeta);
    ok = ok && n * std::log(std::abs(w)) > -half_log2;
  }
  return {ok, worst};
}

}  // namespace detail

/**
 * R and epsilon such that for |z| > R and rho(z, w) <= epsilon
 * 2^(-1/2) < ((1-|z|^2)/(1-|w|^2))^E < 2^(1/2),
 * 2^(-1/2) < (|1 - conj(w) z|/(1-|z|^2))^E < 2^(1/2), and |w|^N > 2^(-1/2).
 * Verified on a (|z|, rho, angle) sample grid; epsilon is halved on failure.
 */
inline Calibration calibrate(int n, const SpaceParams& params, const MSequence& seq) {
  params.validate();
  if (n < 0 || static_cast<std::size_t>(n + 1) != seq.size())
    throw domain_error("calibrate: m-sequence length must be N+1");
  if (!m_condition_holds(seq)) throw domain_error("calibrate: m-sequence violates the dominance condition");
  Calibration c;
  c.exponent = seq.shifted.back() + n + 2;
  real eps = two_sided_radius(c.exponent);
  for (int attempt = 0; attempt < 60; ++attempt) {
    if (!(eps > 1e-4900L)) {
      throw numeric_error("calibrate: epsilon underflows; use the greedy strategy or a smaller N");
    }
    const real r0 = n == 0 ? real(0) : std::exp2(real(-1) / (2 * n));
    c.R = std::max(real(0.5), (r0 + 8 * eps) / (1 + 8 * eps) + 64 * std::numeric_limits<real>::epsilon());
    if (!(c.R < 1)) throw numeric_error("calibrate: no admissible radius R < 1");
    bool ok = true;
    c.samples = 0;
    const real radii[] = {0, 0.5L, 0.9L, 0.99L, 0.999L, 0.999999L};
    for (real a : radii) {
      const real mod = c.R + (1 - c.R) * a;
      for (real frac : {real(1), real(0.5), real(1e-3)}) {
        for (int t = 0; t < 16 && ok; ++t) {
          const cplx zeta = std::polar(eps * frac, 2 * kPi * t / 16);
          for (int s = 0; s < 4; ++s) {
            const auto r = detail::ratio_sample(std::polar(mod, kPi * s / 2 + real(0.3)), zeta, c.exponent, n);
            ++c.samples;
            if (!r.ok) ok = false;
          }
        }
      }
    }
    if (ok) {
      c.epsilon = eps;
      return c;
    }
    eps /= 2;
    ++c.halvings;
  }
  throw numeric_error("calibrate: sampled ratio bounds never held");
}

}  // namespace bergman

#endif  // BERGMAN_M_SEQUENCE_HPP_
