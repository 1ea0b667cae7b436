// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bergman/bergman.hpp"

using namespace bergman;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

const std::vector<SpaceParams> kParams = {SpaceParams(1, -1), SpaceParams(1, 0),   SpaceParams(1, 1.5L),
                                          SpaceParams(2, -1), SpaceParams(2, 0),   SpaceParams(2, 1.5L),
                                          SpaceParams(4, -1), SpaceParams(4, 0),   SpaceParams(4, 1.5L)};

std::string label(const SpaceParams& sp) {
  std::ostringstream s;
  s << "p=" << static_cast<double>(sp.p) << ",a=" << static_cast<double>(sp.alpha);
  return s.str();
}

real uniform(std::mt19937_64& rng) { return std::ldexp(real(rng() >> 11), -53); }

cplx on_circle(std::mt19937_64& rng, real r) { return std::polar(r, 2 * kPi * uniform(rng)); }

real exponent_e(const SpaceParams& sp) { return (2 + sp.alpha) / sp.p; }

InterpolationProblem make_problem(std::vector<cplx> pts, int J, const SpaceParams& sp) {
  InterpolationProblem pb;
  pb.points = std::move(pts);
  pb.J = J;
  pb.params = sp;
  return pb;
}

// ---------------------------------------------------------------------------
// 1. Interpolation contract on random problems.

Outcome interpolation_contract() {
  std::mt19937_64 rng(101);
  int total = 0, ok = 0;
  real worst_target = 0, worst_other = 0;
  std::string first_bad;
  for (int trial = 0; trial < 243; ++trial) {
    const int n = trial % 3;
    const SpaceParams sp = kParams[(trial / 3) % kParams.size()];
    const bool clustered = (trial / 27) % 2 == 0;
    const int J = static_cast<int>(rng() % (n + 1));
    std::vector<cplx> pts(n + 1);
    if (clustered) {
      const auto seq = build_m_sequence(n, sp, MStrategy::greedy);
      const auto cal = calibrate(n, sp, seq);
      const real mod = cal.R + (1 - cal.R) * (real(0.02) + real(0.97) * uniform(rng));
      pts[J] = on_circle(rng, mod);
      const MobiusMap to_base(pts[J]);
      for (int k = 0; k <= n; ++k) {
        if (k == J) continue;
        const real u = uniform(rng);
        pts[k] = u < 0.2 ? pts[J] : to_base(on_circle(rng, cal.epsilon * u));
      }
    } else {
      for (auto& p : pts) p = on_circle(rng, 1 - std::pow(real(10), -3 * uniform(rng)));
    }
    ++total;
    const auto pb = make_problem(pts, J, sp);
    try {
      InterpolationOptions opt;
      opt.estimate_norm = false;
      const auto res = interpolate(pb, opt);
      const real target = std::pow(one_minus_abs2(pts[J]), -(exponent_e(sp) + J));
      bool good = true;
      for (int k = 0; k <= n; ++k) {
        const cplx v = res.f.jet(pts[k], k).derivative(k);
        if (k == J) {
          const real err = std::abs(std::abs(v) - target) / target + std::abs(std::arg(v)) * (std::abs(v) > 0);
          worst_target = std::max(worst_target, err);
          good = good && err <= 1e-8L;
        } else {
          const real err = std::abs(v) / target;
          worst_other = std::max(worst_other, err);
          good = good && err <= 1e-8L;
        }
      }
      if (good) {
        ++ok;
      } else if (first_bad.empty()) {
        first_bad = "N=" + std::to_string(n) + " " + label(sp) + " case " + to_string(res.kind);
      }
    } catch (const std::exception& e) {
      if (first_bad.empty()) first_bad = std::string("exception: ") + e.what();
    }
  }
  Outcome o;
  o.pass = ok == total && total >= 200;
  std::ostringstream s;
  s << ok << "/" << total << " problems, worst rel. error at J " << static_cast<double>(worst_target)
    << ", worst off-target " << static_cast<double>(worst_other);
  if (!first_bad.empty()) s << "; first failure: " << first_bad;
  o.detail = s.str();
  return o;
}

// ---------------------------------------------------------------------------
// 2. Norm ceilings do not grow toward the boundary.

Outcome norm_uniformity() {
  std::mt19937_64 rng(202);
  const real radii[] = {0.3L, 0.9L, 0.99L, 0.999L};
  const std::vector<SpaceParams> configs = {SpaceParams(2, 0), SpaceParams(1, -1), SpaceParams(4, 1.5L)};
  Outcome o;
  std::ostringstream s;
  for (int n = 0; n <= 2; ++n) {
    for (const SpaceParams& sp : configs) {
      std::map<int, real> ceiling;  // log10 of max norm per radius index
      for (int i = 0; i < 4; ++i) ceiling[i] = -kInf;
      bool failed = false;
      for (int trial = 0; trial < 50; ++trial) {
        const int ri = trial % 4;
        std::vector<cplx> pts(n + 1);
        for (auto& p : pts) p = on_circle(rng, radii[ri]);
        const int J = static_cast<int>(rng() % (n + 1));
        try {
          InterpolationOptions opt;
          opt.quadrature.radial = 24;
          opt.quadrature.angular = 48;
          const auto res = interpolate(make_problem(pts, J, sp), opt);
          ceiling[ri] = std::max(ceiling[ri], res.norm.log_value / std::log(real(10)));
        } catch (const std::exception&) {
          failed = true;
        }
      }
      const real growth = ceiling[3] - ceiling[0];
      const bool good = !failed && std::isfinite(ceiling[3]) && growth <= std::log10(real(2));
      o.pass = o.pass && good;
      if (!good) {
        s << " N=" << n << " " << label(sp) << ": log10 ceilings";
        for (int i = 0; i < 4; ++i) s << " " << static_cast<double>(ceiling[i]);
        if (failed) s << " (numerical failure)";
        s << ";";
      }
    }
  }
  o.detail = o.pass ? "9 configurations, ceiling(0.999) <= 2 ceiling(0.3) everywhere" : "violations:" + s.str();
  return o;
}

// ---------------------------------------------------------------------------
// 3. Decay on |z| <= 1/2 as the points approach the circle.

// max |f| over |z| <= 1/2 via the maximum principle: dense sampling of |z| = 1/2.
real log_max_half_disk(const AnalyticFn& f) {
  real best = kNegInf;
  const int m = 2048;
  for (int j = 0; j < m; ++j) {
    const cplx z = std::polar(real(0.5), 2 * kPi * j / m);
    const Jet jt = f.jet(z, 0);
    best = std::max(best, std::log(std::abs(jt.derivative(0))));
  }
  return best;
}

Outcome decay_on_compacts() {
  std::mt19937_64 rng(303);
  int sets = 0, ok = 0;
  std::string first_bad;
  for (int n = 0; n <= 2; ++n) {
    for (const SpaceParams& sp : {SpaceParams(2, 0), SpaceParams(1, -1), SpaceParams(4, 1.5L)}) {
      for (int d = 0; d < 4; ++d) {
        std::vector<cplx> dirs(n + 1);
        for (auto& u : dirs) u = on_circle(rng, 1);
        if (d == 0) std::fill(dirs.begin(), dirs.end(), dirs[0]);
        const int J = static_cast<int>(rng() % (n + 1));
        ++sets;
        real prev = kInf;
        bool good = true;
        for (real t : {0.9L, 0.99L, 0.999L}) {
          std::vector<cplx> pts;
          for (const cplx& u : dirs) pts.push_back(t * u);
          try {
            InterpolationOptions opt;
            opt.estimate_norm = false;
            const real m = log_max_half_disk(interpolate(make_problem(pts, J, sp), opt).f);
            good = good && m < prev;
            prev = m;
          } catch (const std::exception&) {
            good = false;
          }
        }
        if (good) {
          ++ok;
        } else if (first_bad.empty()) {
          first_bad = "N=" + std::to_string(n) + " " + label(sp);
        }
      }
    }
  }
  Outcome o;
  o.pass = ok == sets;
  o.detail = std::to_string(ok) + "/" + std::to_string(sets) + " direction sets strictly decreasing in t" +
             (first_bad.empty() ? "" : "; first failure: " + first_bad);
  return o;
}

// ---------------------------------------------------------------------------
// 4. Matrix lemmas against an Eigen oracle.

using EMat = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;

EMat to_eigen(const ComplexMatrix& a) {
  EMat m(a.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = a(i, j);
  return m;
}

ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  ComplexMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = cplx(2 * uniform(rng) - 1, 2 * uniform(rng) - 1);
  return a;
}

Outcome matrix_lemmas() {
  std::mt19937_64 rng(404);
  const auto t0 = Clock::now();
  int inv_bad = 0, had_bad = 0, ger_bad = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const std::size_t n = 1 + t % 4;
    const ComplexMatrix a = random_matrix(rng, n);
    const EMat e = to_eigen(a);
    Eigen::JacobiSVD<EMat> svd(e);
    const real smax = svd.singularValues()(0);
    const real smin = svd.singularValues()(n - 1);
    const real adet = std::abs(e.determinant());
    if (adet > 1e-12L) {
      const real d = adet * (real(0.1) + real(0.9) * uniform(rng));
      const auto chk = inverse_norm_bound_check(a, d);
      const real oracle_lhs = 1 / smin;
      const real oracle_rhs = std::pow(smax, real(n - 1)) / d;
      if (!chk.holds || oracle_lhs > oracle_rhs * (1 + 1e-12L) || std::abs(chk.lhs - oracle_lhs) > 1e-9L * oracle_lhs)
        ++inv_bad;
    }
    const auto had = hadamard_check(a);
    real cols = 1;
    for (std::size_t j = 0; j < n; ++j) cols *= e.col(j).norm();
    if (!had.holds || adet > cols * (1 + 1e-12L)) ++had_bad;

    ComplexMatrix g = random_matrix(rng, n);
    for (std::size_t i = 0; i < n; ++i) {
      real off = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) off += std::abs(g(i, j));
      g(i, i) = std::polar(1 + off + real(0.5) * uniform(rng), 2 * kPi * uniform(rng));
    }
    const auto ger = gershgorin_dominance(g);
    if (!ger.all_dominant || !ger.det_lower_bound_ok || std::abs(to_eigen(g).determinant()) < 1) ++ger_bad;
  }
  const cplx d23[] = {2, 3};
  const auto eq = inverse_norm_bound_check(ComplexMatrix::diagonal(d23), 6);
  const bool equality = std::abs(eq.lhs - real(0.5)) <= 1e-15L && std::abs(eq.rhs - real(0.5)) <= 1e-15L && eq.holds;
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  Outcome o;
  o.pass = inv_bad == 0 && had_bad == 0 && ger_bad == 0 && equality && secs <= 30;
  std::ostringstream s;
  s << trials << " trials each; counterexamples: inverse-norm " << inv_bad << ", Hadamard " << had_bad
    << ", Gershgorin " << ger_bad << "; diag(2,3): lhs " << static_cast<double>(eq.lhs) << " rhs "
    << static_cast<double>(eq.rhs) << "; " << secs << " s";
  o.detail = s.str();
  return o;
}

// ---------------------------------------------------------------------------
// 5. m-sequences against an independent margin oracle.

real log_sum_exp(const std::vector<real>& xs) {
  real mx = -kInf;
  for (real x : xs) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  real acc = 0;
  for (real x : xs) acc += std::exp(x - mx);
  return mx + std::log(acc);
}

std::vector<real> oracle_margins(const std::vector<real>& m, const SpaceParams& sp) {
  const std::size_t n = m.size();
  std::vector<real> mt(n);
  for (std::size_t j = 0; j < n; ++j) mt[j] = m[j] + 1 + exponent_e(sp);
  const auto term = [&](std::size_t j, std::size_t k) {
    real lp = 0;
    for (std::size_t i = 0; i < k; ++i) lp += std::log(mt[j] + i);
    return lp + (real(0.5) - real(j)) * std::log(mt[j]);
  };
  std::vector<real> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<real> rhs{0};
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) rhs.push_back(std::log(real(2)) + term(j, k));
    out[k] = std::log(real(0.5)) + term(k, k) - log_sum_exp(rhs);
  }
  return out;
}

Outcome m_sequences() {
  Outcome o;
  std::ostringstream s;
  const auto paper = build_m_sequence(1, SpaceParams(2, 0), MStrategy::paper);
  const bool exact = paper.m.size() == 2 && paper.m[0] == 2 && paper.m[1] == 6400;
  s << "paper N=1 p=2 a=0: [" << static_cast<double>(paper.m[0]) << ", " << static_cast<double>(paper.m[1]) << "]";
  o.pass = exact;
  int checked = 0, positive = 0;
  std::string negatives;
  for (MStrategy st : {MStrategy::paper, MStrategy::greedy}) {
    for (int n = 0; n <= 3; ++n) {
      for (const SpaceParams& sp : kParams) {
        const auto seq = build_m_sequence(n, sp, st);
        const auto margins = oracle_margins(seq.m, sp);
        ++checked;
        real worst = kInf;
        for (real x : margins) worst = std::min(worst, x);
        if (worst > 0) {
          ++positive;
        } else {
          std::ostringstream w;
          w << " " << to_string(st) << "/N=" << n << "/" << label(sp) << "(" << static_cast<double>(worst) << ")";
          negatives += w.str();
        }
      }
    }
  }
  o.pass = o.pass && positive == checked;
  s << "; positive margins " << positive << "/" << checked;
  if (!negatives.empty()) s << "; nonpositive:" << negatives;
  o.detail = s.str();
  return o;
}

// ---------------------------------------------------------------------------
// 6. Kernel analytics.

Outcome kernel_analytics() {
  std::mt19937_64 rng(606);
  Outcome o;
  real worst = 0;
  for (int t = 0; t < 100; ++t) {
    const real m = static_cast<real>(rng() % 11);
    const SpaceParams sp = kParams[rng() % kParams.size()];
    const cplx lam = on_circle(rng, real(0.95) * std::sqrt(uniform(rng)));
    const cplx z = on_circle(rng, real(0.95) * std::sqrt(uniform(rng)));
    const int k = static_cast<int>(rng() % 5);
    const cplx closed = kernel_derivative(m, lam, k, z, sp);
    const cplx jet = AnalyticFn::kernel(m, lam, sp).jet(z, k).derivative(k);
    worst = std::max(worst, std::abs(closed - jet) / std::abs(closed));
  }
  std::ostringstream s;
  s << "derivative vs jet worst rel. " << static_cast<double>(worst);
  o.pass = worst <= 1e-10L;
  real worst_norm = 0;
  for (cplx lam : {cplx(0), cplx(0.5L), cplx(0, 0.9L)}) {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-10L;
    const auto nrm = norm(AnalyticFn::kernel(0, lam, SpaceParams(2, 0)), SpaceParams(2, 0), cfg);
    worst_norm = std::max(worst_norm, std::abs(nrm.value() - 1));
  }
  s << "; |norm - 1| " << static_cast<double>(worst_norm);
  o.pass = o.pass && worst_norm <= 1e-6L;
  for (auto [alpha, beta] : {std::pair<real, real>{0, 1}, {1, 0.5L}}) {
    real lo = kInf, hi = 0;
    bool resolved = true;
    for (real r : {0.0L, 0.25L, 0.5L, 0.75L, 0.9L, 0.95L, 0.98L, 0.99L}) {
      for (real th : {0.0L, 2.0L}) {
        const auto c = forelli_rudin_bound_check(alpha, beta, std::polar(r, th));
        resolved = resolved && c.resolved;
        lo = std::min(lo, c.ratio);
        hi = std::max(hi, c.ratio);
      }
    }
    s << "; ratio range (" << static_cast<double>(alpha) << "," << static_cast<double>(beta) << ") ["
      << static_cast<double>(lo) << ", " << static_cast<double>(hi) << "]";
    o.pass = o.pass && resolved && lo > 0 && hi / lo <= 10;
  }
  o.detail = s.str();
  return o;
}

// ---------------------------------------------------------------------------
// 7. Criteria checkers on the reference examples.

Outcome criteria_checkers() {
  const auto pair = [](const char* u, const char* phi, int k) {
    return SymbolPair{parse_expression(u), parse_expression(phi), k};
  };
  Outcome o;
  std::ostringstream s;
  const auto r1 = order_bounded_integral(pair("1", "0", 0), SpaceParams(2, 0), SpaceParams(3, 1), {});
  const auto r2 = order_bounded_integral(pair("1", "z", 0), SpaceParams(2, 0), SpaceParams(2, 4), {});
  const auto r3 = order_bounded_integral(pair("1", "z", 0), SpaceParams(2, 0), SpaceParams(2, 0), {});
  const bool ob = r1.verdict == Verdict::yes && std::abs(r1.value - 1) <= 1e-4L && r2.verdict == Verdict::yes &&
                  std::abs(r2.value - real(5) / 3) <= 1e-4L && r3.verdict == Verdict::no;
  s << "order-bounded: " << static_cast<double>(r1.value) << ", " << static_cast<double>(r2.value) << ", "
    << to_string(r3.verdict);

  const auto c1 = compactness_profile(pair("1", "0.5z", 0), SpaceParams(2, 0));
  const auto c2 = compactness_profile(pair("1", "z", 0), SpaceParams(2, 0));
  const auto c3 = compactness_profile(pair("1/(1 - z)", "0.5z", 0), SpaceParams(2, 0));
  const bool cp = c1.limit_zero == Verdict::vacuous_true && c1.compact == Verdict::yes && c2.compact == Verdict::no &&
                  c3.u_bounded == Verdict::no && c3.compact == Verdict::no;
  s << "; compact: " << to_string(c1.compact) << "/" << to_string(c1.limit_zero) << ", " << to_string(c2.compact)
    << ", " << to_string(c3.compact);

  const std::vector<std::vector<SymbolPair>> specs = {
      {pair("1", "0.5z", 0)},
      {pair("1", "z", 0)},
      {pair("1/(1 - z)", "0.5z", 0)},
      {pair("(1 - z)^5", "(1 + z)/2", 1)},
      {pair("1", "0.5z", 0), pair("z", "z^2", 1)},
      {pair("z", "0.3 + 0.2z", 0), pair("1", "0.5z", 2)},
  };
  int consistent = 0;
  for (const auto& pairs : specs) {
    OperatorSpec spec;
    spec.pairs = pairs;
    spec.source = SpaceParams(2, 0);
    const auto sc = sequence_criterion_check(spec);
    if (sc.consistent && sc.compact_verdict == check_compact(spec).overall) ++consistent;
  }
  s << "; sequence criterion consistent " << consistent << "/" << specs.size();
  o.pass = ob && cp && consistent == static_cast<int>(specs.size());
  o.detail = s.str();
  return o;
}

// ---------------------------------------------------------------------------
// 8. Growth probe ratio along a radial sweep.

Outcome growth_bound() {
  Outcome o;
  std::ostringstream s;
  for (const SpaceParams& sp : {SpaceParams(2, 0), SpaceParams(1, -1), SpaceParams(4, 1.5L)}) {
    for (int n = 0; n <= 2; ++n) {
      real lo = kInf, hi = -kInf;  // log10 ratio
      bool failed = false;
      for (real r : {0.0L, 0.5L, 0.9L, 0.99L}) {
        try {
          InterpolationOptions opt;
          opt.quadrature.radial = 24;
          opt.quadrature.angular = 48;
          const auto g = growth_bound_probe(r, n, sp, opt);
          const real l = (g.log_achieved - g.log_reference) / std::log(real(10));
          lo = std::min(lo, l);
          hi = std::max(hi, l);
        } catch (const std::exception&) {
          failed = true;
        }
      }
      const bool good = !failed && hi - lo <= 1;
      o.pass = o.pass && good;
      if (!good) {
        s << " n=" << n << " " << label(sp) << " log10 ratio in [" << static_cast<double>(lo) << ", "
          << static_cast<double>(hi) << "]" << (failed ? " (numerical failure)" : "") << ";";
      }
    }
  }
  o.detail = o.pass ? "c2/c1 <= 10 for all 9 configurations" : "spread above 10:" + s.str();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"interpolation contract", interpolation_contract},
      {"norm uniformity", norm_uniformity},
      {"decay on compacts", decay_on_compacts},
      {"matrix lemma suite", matrix_lemmas},
      {"m-sequence fidelity", m_sequences},
      {"kernel analytics", kernel_analytics},
      {"criteria checkers", criteria_checkers},
      {"growth bound", growth_bound},
  };
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("%s [%zu] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
