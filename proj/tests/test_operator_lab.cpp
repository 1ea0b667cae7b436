#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bergman/expression.hpp"
#include "bergman/operator_lab.hpp"

using namespace bergman;

namespace {

AnalyticFn ex(const std::string& s) { return parse_expression(s); }

SymbolPair pair(const std::string& u, const std::string& phi, int k) { return {ex(u), ex(phi), k}; }

OperatorSpec spec(std::vector<SymbolPair> pairs, SpaceParams src = {}, std::optional<SpaceParams> tgt = {}) {
  OperatorSpec s;
  s.pairs = std::move(pairs);
  s.source = src;
  s.target = tgt;
  return s;
}

}  // namespace

TEST(Apply, IdentityComposition) {
  const auto s = spec({pair("1", "z", 0)});
  const AnalyticFn f = ex("z^3 - 2z + 1");
  for (cplx z : {cplx(0.3L, -0.2L), cplx(-0.7L, 0.1L)})
    EXPECT_NEAR(static_cast<double>(std::abs(apply(s, f, z) - f(z))), 0, 1e-15);
}

TEST(Apply, DerivativeAtOrigin) {
  const auto s = spec({pair("1", "0", 1)});
  const AnalyticFn f = ex("(1 + 3z)^2");
  for (cplx z : {cplx(0), cplx(0.5L, 0.5L)}) EXPECT_NEAR(static_cast<double>(std::abs(apply(s, f, z) - cplx(6))), 0, 1e-15);
}

TEST(Apply, TwoPairsOnSquare) {
  const auto s = spec({pair("1", "z", 0), pair("1", "z", 1)});
  EXPECT_NEAR(static_cast<double>(std::abs(apply(s, ex("z^2"), 0.5L) - cplx(1.25L))), 0, 1e-15);
}

TEST(Apply, Linear) {
  const auto s = spec({pair("1 + z", "0.5z", 0), pair("z^2", "(z + 0.3)/2", 2), pair("0.1", "z^2", 1)});
  const AnalyticFn f = ex("kernel(1, 0.4+0.2i)");
  const AnalyticFn g = ex("blaschke(0.5, -0.3i)");
  const cplx a(0.7L, -1.3L);
  const AnalyticFn h = AnalyticFn::sum({AnalyticFn::scale(a, f), g});
  for (cplx z : {cplx(0.1L, 0.2L), cplx(-0.6L, 0.3L), cplx(0.9L, 0)}) {
    const cplx lhs = apply(s, h, z);
    const cplx rhs = a * apply(s, f, z) + apply(s, g, z);
    EXPECT_LE(std::abs(lhs - rhs), 1e-12L * std::max(real(1), std::abs(rhs)));
  }
}

TEST(Apply, PhiOutsideDiskIsRejected) {
  const auto s = spec({pair("1", "2z", 0)});
  EXPECT_THROW(apply(s, ex("z"), 0.6L), domain_error);
}

TEST(SelfMap, Validation) {
  EXPECT_NO_THROW(validate_self_map(ex("0.5z")));
  EXPECT_NO_THROW(validate_self_map(ex("mobius(0.3+0.4i)")));
  EXPECT_THROW(validate_self_map(ex("1.01z")), self_map_error);
  EXPECT_THROW(validate_self_map(ex("(z + 1.2)/2")), self_map_error);
}

TEST(OrderBounded, ConstantSymbolIsOne) {
  for (const auto& [src, tgt] : std::vector<std::pair<SpaceParams, SpaceParams>>{
           {SpaceParams(2, 0), SpaceParams(2, 0)}, {SpaceParams(1, -1), SpaceParams(3, 2)}}) {
    const auto r = order_bounded_integral(pair("1", "0", 0), src, tgt, {});
    EXPECT_EQ(r.verdict, Verdict::yes);
    EXPECT_NEAR(static_cast<double>(r.value), 1, 1e-8);
  }
}

TEST(OrderBounded, ConvergentRadialIntegral) {
  // 5 int_0^1 (1-r^2)^2 2r dr = 5/3.
  const auto r = order_bounded_integral(pair("1", "z", 0), SpaceParams(2, 0), SpaceParams(2, 4), {});
  EXPECT_EQ(r.verdict, Verdict::yes);
  EXPECT_NEAR(static_cast<double>(r.value), 5.0 / 3.0, 1e-6);
}

TEST(OrderBounded, DivergentRadialIntegral) {
  const auto r = order_bounded_integral(pair("1", "z", 0), SpaceParams(2, 0), SpaceParams(2, 0), {});
  EXPECT_EQ(r.verdict, Verdict::no);
  // Partial integrals are 1/(1-r^2) - 1, so gamma is 1.
  EXPECT_NEAR(static_cast<double>(r.growth_exponent), 1, 0.05);
  ASSERT_GE(r.partials.size(), 3u);
  for (std::size_t j = 0; j < r.partials.size(); ++j) {
    const real rr = r.radii[j];
    EXPECT_NEAR(static_cast<double>(r.partials[j] * (1 - rr * rr)), static_cast<double>(rr * rr), 1e-6);
  }
}

TEST(OrderBounded, LogarithmicDivergence) {
  // k = 1, beta = 3: exponent 4 = beta + 1, partial integrals grow like log 1/(1-r).
  const auto r = order_bounded_integral(pair("1", "z", 1), SpaceParams(2, 0), SpaceParams(2, 3), {});
  EXPECT_EQ(r.verdict, Verdict::no);
  EXPECT_LT(r.growth_exponent, 0.05L);
}

TEST(OrderBounded, ConstantSelfMapsAreBounded) {
  const auto s = spec({pair("1 + z", "0.9", 0), pair("z^3", "-0.5i", 1), pair("2", "0.99", 2)}, SpaceParams(2, 0),
                      SpaceParams(1, 0.5L));
  const auto c = check_order_bounded(s);
  EXPECT_EQ(c.overall, Verdict::yes);
  for (const auto& r : c.pairs) EXPECT_EQ(r.verdict, Verdict::yes);
}

TEST(OrderBounded, OneDivergentPairFlipsVerdict) {
  auto s = spec({pair("1", "0.5", 0), pair("1", "0.5z", 1)}, SpaceParams(2, 0), SpaceParams(2, 0));
  EXPECT_EQ(check_order_bounded(s).overall, Verdict::yes);
  s.pairs[0] = pair("1", "z", 0);
  const auto c = check_order_bounded(s);
  EXPECT_EQ(c.overall, Verdict::no);
  EXPECT_EQ(c.pairs[0].verdict, Verdict::no);
  EXPECT_EQ(c.pairs[1].verdict, Verdict::yes);
}

TEST(OrderBounded, TwoSummandCaseMatchesPairwiseIntegrals) {
  // u C_phi + D_{v,phi}: the two displayed integrals, here 5/3 and 5.
  const SpaceParams src(2, 0), tgt(2, 4);
  const auto s = spec({pair("1", "z", 0), pair("1", "z", 1)}, src, tgt);
  const auto c = check_order_bounded(s);
  ASSERT_EQ(c.pairs.size(), 2u);
  EXPECT_EQ(c.overall, Verdict::yes);
  EXPECT_NEAR(static_cast<double>(c.pairs[0].value), 5.0 / 3.0, 1e-6);
  EXPECT_NEAR(static_cast<double>(c.pairs[1].value), 5.0, 1e-6);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto alone = order_bounded_integral(s.pairs[i], src, tgt, {});
    EXPECT_EQ(alone.value, c.pairs[i].value);
  }
}

TEST(OrderBounded, RequiresBergmanTarget) {
  EXPECT_THROW(check_order_bounded(spec({pair("1", "z", 0)}, SpaceParams(2, 0), SpaceParams(2, -1))), domain_error);
  EXPECT_THROW(check_order_bounded(spec({pair("1", "z", 0), pair("z", "z", 0)}, SpaceParams(2, 0), SpaceParams(2, 0))),
               domain_error);
}

TEST(Compactness, ContractiveSymbolIsVacuous) {
  for (int k : {0, 1, 3}) {
    const auto p = compactness_profile(pair("1", "0.5z", k), SpaceParams(2, 0));
    EXPECT_EQ(p.limit_zero, Verdict::vacuous_true);
    EXPECT_EQ(p.u_bounded, Verdict::yes);
    EXPECT_EQ(p.compact, Verdict::yes);
    EXPECT_NEAR(static_cast<double>(p.sup_phi), 0.5, 1e-9);
  }
}

TEST(Compactness, IdentityIsNotCompact) {
  const auto p = compactness_profile(pair("1", "z", 0), SpaceParams(2, 0));
  EXPECT_EQ(p.limit_zero, Verdict::no);
  EXPECT_EQ(p.compact, Verdict::no);
  // ratio = (1-|z|^2)^-1 grows along the thresholds.
  for (std::size_t i = 1; i < p.rows.size(); ++i) EXPECT_GE(p.rows[i].sup_ratio, p.rows[i - 1].sup_ratio);
  EXPECT_GT(p.rows.back().sup_ratio, 1e6L);
}

TEST(Compactness, UnboundedWeight) {
  for (const char* phi : {"0.5z", "z"}) {
    const auto p = compactness_profile(pair("1/(1 - z)", phi, 0), SpaceParams(2, 0));
    EXPECT_EQ(p.u_bounded, Verdict::no);
    EXPECT_EQ(p.compact, Verdict::no);
  }
}

TEST(Compactness, WeightVanishingAtContactPoint) {
  // phi touches the circle only at 1, where u = (1-z)^5 kills the ratio.
  const auto p = compactness_profile(pair("(1 - z)^5", "(1 + z)/2", 1), SpaceParams(2, 0));
  EXPECT_EQ(p.u_bounded, Verdict::yes);
  EXPECT_EQ(p.limit_zero, Verdict::yes);
  EXPECT_EQ(p.compact, Verdict::yes);
}

TEST(Compactness, CheckIsConjunction) {
  auto s = spec({pair("1", "0.5z", 0), pair("(1 - z)^5", "(1 + z)/2", 1)});
  EXPECT_EQ(check_compact(s).overall, Verdict::yes);
  s.pairs.push_back(pair("1", "z", 2));
  EXPECT_EQ(check_compact(s).overall, Verdict::no);
}

TEST(SequenceCriterion, CompactSpecKernelSequenceDecays) {
  const auto s = spec({pair("1", "0.5z", 0), pair("(1 - z)^5", "(1 + z)/2", 1)});
  const auto c = sequence_criterion_check(s);
  EXPECT_EQ(c.compact_verdict, Verdict::yes);
  EXPECT_EQ(c.mode, "kernel-sequence");
  EXPECT_TRUE(c.consistent);
  ASSERT_GE(c.log_values.size(), 2u);
  EXPECT_LT(c.log_values.back(), c.log_values.front());
}

TEST(SequenceCriterion, NotCompactWitnessesStayAway) {
  const auto c = sequence_criterion_check(spec({pair("1", "z", 0)}));
  EXPECT_EQ(c.compact_verdict, Verdict::no);
  EXPECT_EQ(c.mode, "interpolation-witness");
  EXPECT_TRUE(c.consistent);
  for (real v : c.log_values) EXPECT_GT(v, std::log(real(1e-3)));
}

TEST(SequenceCriterion, UnboundedWeight) {
  const auto c = sequence_criterion_check(spec({pair("1/(1 - z)", "0.5z", 0)}));
  EXPECT_EQ(c.compact_verdict, Verdict::no);
  EXPECT_EQ(c.mode, "unbounded-weight");
  EXPECT_TRUE(c.consistent);
}

TEST(GrowthProbe, OriginOrderZero) {
  const auto g = growth_bound_probe(0, 0, SpaceParams(2, 0));
  EXPECT_NEAR(static_cast<double>(g.log_reference), 0, 1e-15);
  EXPECT_GE(g.ratio, 0.5L);
  EXPECT_LE(g.ratio, 2.0L);
}

TEST(GrowthProbe, RadialSweepStaysInOneInterval) {
  const real r0 = growth_bound_probe(0, 0, SpaceParams(2, 0)).ratio;
  for (real t : {0.9L, 0.99L}) {
    const real r = growth_bound_probe(t, 0, SpaceParams(2, 0)).ratio;
    EXPECT_GT(r, r0 / 4) << static_cast<double>(t);
    EXPECT_LT(r, r0 * 4) << static_cast<double>(t);
  }
}

TEST(GrowthProbe, RandomUnitPolynomialsObeyUpperBound) {
  // In A^2 the extremal value is the diagonal of d^n dbar^n of (1 - z wbar)^-2,
  // bounded by (2n+1)! (1-|z|^2)^-(2n+2).
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  const SpaceParams sp(2, 0);
  for (int n : {0, 1, 2}) {
    const real c_ref = std::sqrt(std::tgamma(real(2 * n + 2)));
    for (real t : {0.0L, 0.5L, 0.9L}) {
      const cplx z = std::polar(t, real(0.3));
      const real reference = std::pow(1 - t * t, -(1 + real(n)));
      for (int trial = 0; trial < 100; ++trial) {
        std::vector<cplx> c(12);
        real norm2 = 0;
        for (std::size_t k = 0; k < c.size(); ++k) {
          c[k] = cplx(g(rng), g(rng)) / real(k + 1);
          norm2 += std::norm(c[k]) / real(k + 1);
        }
        for (auto& x : c) x /= std::sqrt(norm2);
        const AnalyticFn f = AnalyticFn::polynomial(c);
        EXPECT_LE(std::abs(f.jet(z, n).derivative(n)), c_ref * reference * (1 + 1e-12L));
      }
    }
  }
}
