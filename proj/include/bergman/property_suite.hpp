#ifndef BERGMAN_PROPERTY_SUITE_HPP_
#define BERGMAN_PROPERTY_SUITE_HPP_

#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bergman/analytic_fn.hpp"
#include "bergman/bergman_space.hpp"
#include "bergman/expression.hpp"
#include "bergman/small_linalg.hpp"

namespace bergman {

struct PropertyOutcome {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::size_t precondition_errors = 0;
  std::string extremal_label;  // what `extremal` measures
  real extremal = 0;
  std::string falsifying;      // first failing input
  std::string precondition;    // first precondition message
};

struct SuiteOptions {
  std::uint64_t seed = 20240601;
  std::size_t trials = 1000;
  /// Adds a trial whose determinant floor D exceeds |det A|.
  bool inject_determinant_violation = false;
};

struct SuiteReport {
  std::vector<PropertyOutcome> properties;
  bool all_pass() const {
    for (const auto& p : properties)
      if (p.failures != 0) return false;
    return true;
  }
};

namespace detail {

// Portable uniform on [0, 1): the top 53 bits of the generator output.
inline real unit(std::mt19937_64& rng) { return std::ldexp(real(rng() >> 11), -53); }

inline cplx unit_disk_point(std::mt19937_64& rng, real rmax) {
  return std::polar(rmax * std::sqrt(unit(rng)), 2 * kPi * unit(rng));
}

inline cplx gaussian_like(std::mt19937_64& rng) { return cplx(2 * unit(rng) - 1, 2 * unit(rng) - 1); }

inline ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  ComplexMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = gaussian_like(rng);
  return a;
}

inline std::string describe(const ComplexMatrix& a) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (std::size_t i = 0; i < a.size(); ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < a.size(); ++j)
      os << (j ? ", " : "") << static_cast<double>(a(i, j).real()) << std::showpos
         << static_cast<double>(a(i, j).imag()) << "i" << std::noshowpos;
  }
  os << "]";
  return os.str();
}

inline void record_failure(PropertyOutcome& out, const std::string& input) {
  if (out.failures++ == 0) out.falsifying = input;
}

}  // namespace detail

/// ||A^-1|| <= ||A||^(n-1)/D, Hadamard, Gershgorin => |det| >= 1, kernel-norm
/// uniformity, the reproducing property and jets against finite differences.
inline SuiteReport run_property_suite(const SuiteOptions& opt) {
  SuiteReport rep;
  std::mt19937_64 rng(opt.seed);
  const std::size_t t = opt.trials;

  {
    PropertyOutcome o{"inverse-norm-bound", 0, 0, 0, "max lhs/rhs", 0, "", ""};
    const auto run = [&](const ComplexMatrix& a, real d) {
      ++o.trials;
      try {
        const auto r = inverse_norm_bound_check(a, d);
        o.extremal = std::max(o.extremal, r.lhs / r.rhs);
        if (!r.holds) detail::record_failure(o, detail::describe(a) + " D=" + std::to_string(static_cast<double>(d)));
      } catch (const domain_error& e) {
        if (o.precondition_errors++ == 0) o.precondition = std::string(e.what()) + " for " + detail::describe(a);
      }
    };
    const std::vector<cplx> d23{2, 3};
    run(ComplexMatrix::diagonal(d23), 6);
    for (std::size_t i = 0; i < t; ++i) {
      const ComplexMatrix a = detail::random_matrix(rng, 1 + rng() % 6);
      const real d = std::exp(log_abs_det(a)) * (real(0.05) + real(0.95) * detail::unit(rng));
      if (d > 0) run(a, d);
    }
    if (opt.inject_determinant_violation) {
      const ComplexMatrix a = detail::random_matrix(rng, 3);
      run(a, 2 * std::exp(log_abs_det(a)));
    }
    rep.properties.push_back(o);
  }

  {
    PropertyOutcome o{"hadamard", 0, 0, 0, "max |det|/prod", 0, "", ""};
    for (std::size_t i = 0; i < t; ++i) {
      const ComplexMatrix a = detail::random_matrix(rng, 1 + rng() % 6);
      const auto h = hadamard_check(a, {}, rng());
      ++o.trials;
      o.extremal = std::max(o.extremal, h.abs_det / std::min(h.column_product, h.basis_product));
      if (!h.holds) detail::record_failure(o, detail::describe(a));
    }
    rep.properties.push_back(o);
  }

  {
    PropertyOutcome o{"gershgorin-det", 0, 0, 0, "min |det|", kInf, "", ""};
    for (std::size_t i = 0; i < t; ++i) {
      const std::size_t n = 1 + rng() % 6;
      ComplexMatrix a = detail::random_matrix(rng, n);
      for (std::size_t r = 0; r < n; ++r) {
        real off = 0;
        for (std::size_t c = 0; c < n; ++c)
          if (c != r) off += std::abs(a(r, c));
        const real margin = std::pow(real(10), -6 + 6.3L * detail::unit(rng));
        a(r, r) = std::polar(1 + off + margin, 2 * kPi * detail::unit(rng));
      }
      const auto g = gershgorin_dominance(a);
      ++o.trials;
      o.extremal = std::min(o.extremal, std::exp(g.log_abs_det));
      if (!g.all_dominant || !g.det_lower_bound_ok) detail::record_failure(o, detail::describe(a));
    }
    rep.properties.push_back(o);
  }

  {
    // 1 <= ||K_(m, lambda)||^p <= Gamma(g) Gamma(p(m+1)) / Gamma((g + p(m+1))/2)^2, g = 2 + alpha.
    PropertyOutcome o{"kernel-norm-uniformity", 0, 0, 0, "max ||K||^p / limit", 0, "", ""};
    const real ps[] = {1, 2, 4};
    const real alphas[] = {-1, 0, 1.5L};
    for (std::size_t i = 0; i < t; ++i) {
      const SpaceParams sp(ps[rng() % 3], alphas[rng() % 3]);
      const int m = static_cast<int>(rng() % 11);
      const cplx lam = detail::unit_disk_point(rng, real(0.995));
      const real g = 2 + sp.alpha, big = sp.p * (m + 1);
      const real log_limit = std::lgamma(g) + std::lgamma(big) - 2 * std::lgamma((g + big) / 2);
      const real lp = sp.p * kernel_norm(m, lam, sp).log_value;
      ++o.trials;
      o.extremal = std::max(o.extremal, std::exp(lp - log_limit));
      if (lp < -1e-9L || lp > log_limit + 1e-9L) {
        std::ostringstream os;
        os.precision(17);
        os << "m=" << m << " lambda=" << static_cast<double>(lam.real()) << "," << static_cast<double>(lam.imag())
           << " " << sp.to_string();
        detail::record_failure(o, os.str());
      }
    }
    rep.properties.push_back(o);
  }

  {
    PropertyOutcome o{"reproducing-property", 0, 0, 0, "max |<f,K_z> - f(z)|", 0, "", ""};
    const real alphas[] = {0, 1, 2.5L};
    const std::size_t n = std::max<std::size_t>(1, t / 20);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<cplx> c(1 + rng() % 7);
      for (auto& x : c) x = detail::unit_disk_point(rng, 1);
      const real alpha = alphas[rng() % 3];
      const cplx z = detail::unit_disk_point(rng, real(0.5));
      const auto f = AnalyticFn::polynomial(c);
      const real err = std::abs(reproducing_pairing(f, z, alpha) - f(z));
      ++o.trials;
      o.extremal = std::max(o.extremal, err);
      if (!(err <= 1e-8L)) detail::record_failure(o, to_expression(f) + " alpha=" + std::to_string(static_cast<double>(alpha)));
    }
    rep.properties.push_back(o);
  }

  {
    PropertyOutcome o{"jet-vs-finite-difference", 0, 0, 0, "max relative error", 0, "", ""};
    for (std::size_t i = 0; i < t; ++i) {
      const cplx a = detail::unit_disk_point(rng, real(0.8)), b = detail::unit_disk_point(rng, real(0.8));
      AnalyticFn f;
      std::string what;
      switch (rng() % 3) {
        case 0: {
          const int m = static_cast<int>(rng() % 7);
          f = AnalyticFn::kernel(m, a, SpaceParams(2, 0));
          what = "kernel m=" + std::to_string(m);
          break;
        }
        case 1:
          f = AnalyticFn::blaschke(BlaschkeProduct({{a, 1}, {b, 2}}));
          what = "blaschke";
          break;
        default:
          f = AnalyticFn::product({AnalyticFn::mobius(MobiusMap(a)), AnalyticFn::polynomial({1, b, b * b})});
          what = "mobius*quadratic";
      }
      const cplx z = detail::unit_disk_point(rng, real(0.8));
      const real h = 1e-4L;
      const cplx fd = (f(z - 2 * h) - real(8) * f(z - h) + real(8) * f(z + h) - f(z + 2 * h)) / (12 * h);
      const cplx d = f.jet(z, 1).derivative(1);
      const real err = std::abs(fd - d) / std::max<real>(1, std::abs(d));
      ++o.trials;
      o.extremal = std::max(o.extremal, err);
      if (!(err <= 1e-7L)) detail::record_failure(o, what);
    }
    rep.properties.push_back(o);
  }
  return rep;
}

}  // namespace bergman

#endif  // BERGMAN_PROPERTY_SUITE_HPP_
