#ifndef BERGMAN_ANALYTIC_FN_HPP_
#define BERGMAN_ANALYTIC_FN_HPP_

#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "bergman/core.hpp"
#include "bergman/disk_geometry.hpp"
#include "bergman/jet.hpp"
#include "bergman/space_params.hpp"

namespace bergman {

inline constexpr std::size_t kMaxJetOrder = 16;

namespace detail {
struct Node;
}

/**
 * Immutable expression tree for a function analytic on the unit disk.
 *
 * Nodes share children through shared_ptr, so copies are cheap and values
 * can be handed between threads freely.
 */
class AnalyticFn {
 public:
  struct Polynomial {
    std::vector<cplx> coeffs;  // ascending powers
  };
  /// Modified kernel (1-|lambda|^2)^(m+1) / (1 - conj(lambda) z)^(m + 1 + (2+alpha)/p).
  /// m is integer valued but may exceed any machine integer.
  struct Kernel {
    real m;
    cplx lambda;
    SpaceParams params;
  };
  struct Blaschke {
    BlaschkeProduct product;
  };
  struct Mobius {
    MobiusMap map;
  };
  /// outer(map(z)).
  struct PreCompose {
    MobiusMap inner;
    std::vector<AnalyticFn> outer;  // exactly one
  };
  /// outer(inner(z)); inner must map the disk into itself.
  struct Compose {
    std::vector<AnalyticFn> parts;  // {inner, outer}
  };
  struct Scale {
    cplx factor;
    std::vector<AnalyticFn> child;  // exactly one
  };
  struct Sum {
    std::vector<AnalyticFn> terms;
  };
  struct Product {
    std::vector<AnalyticFn> factors;
  };
  struct Quotient {
    std::vector<AnalyticFn> parts;  // {numerator, denominator}
  };

  using Variant = std::variant<Polynomial, Kernel, Blaschke, Mobius, PreCompose, Compose, Scale,
                               Sum, Product, Quotient>;

  AnalyticFn();  // the zero function
  explicit AnalyticFn(Variant v);

  static AnalyticFn constant(cplx c) { return polynomial({c}); }
  static AnalyticFn identity() { return polynomial({0, 1}); }
  static AnalyticFn polynomial(std::vector<cplx> coeffs) { return AnalyticFn(Polynomial{std::move(coeffs)}); }
  static AnalyticFn kernel(real m, cplx lambda, SpaceParams params);
  static AnalyticFn blaschke(BlaschkeProduct b) { return AnalyticFn(Blaschke{std::move(b)}); }
  static AnalyticFn mobius(MobiusMap m) { return AnalyticFn(Mobius{m}); }
  static AnalyticFn precompose(MobiusMap inner, AnalyticFn outer) {
    return AnalyticFn(PreCompose{inner, {std::move(outer)}});
  }
  static AnalyticFn compose(AnalyticFn inner, AnalyticFn outer) {
    return AnalyticFn(Compose{{std::move(inner), std::move(outer)}});
  }
  static AnalyticFn scale(cplx c, AnalyticFn f) { return AnalyticFn(Scale{c, {std::move(f)}}); }
  static AnalyticFn sum(std::vector<AnalyticFn> terms) { return AnalyticFn(Sum{std::move(terms)}); }
  static AnalyticFn product(std::vector<AnalyticFn> factors) {
    return AnalyticFn(Product{std::move(factors)});
  }
  static AnalyticFn quotient(AnalyticFn num, AnalyticFn den) {
    return AnalyticFn(Quotient{{std::move(num), std::move(den)}});
  }

  const Variant& node() const;

  /// Jet (Taylor coefficients with shared log scale) at z, |z| < 1.
  Jet jet(cplx z, std::size_t order) const;
  cplx operator()(cplx z) const { return jet(z, 0).taylor(0); }

  friend AnalyticFn operator+(AnalyticFn a, AnalyticFn b) { return sum({std::move(a), std::move(b)}); }
  friend AnalyticFn operator-(AnalyticFn a, AnalyticFn b) {
    return sum({std::move(a), scale(-1, std::move(b))});
  }
  friend AnalyticFn operator*(AnalyticFn a, AnalyticFn b) {
    return product({std::move(a), std::move(b)});
  }
  friend AnalyticFn operator*(cplx c, AnalyticFn f) { return scale(c, std::move(f)); }
  friend AnalyticFn operator/(AnalyticFn a, AnalyticFn b) { return quotient(std::move(a), std::move(b)); }

 private:
  Jet jet_at(cplx z, std::size_t order, const std::string& path) const;
  std::shared_ptr<const detail::Node> node_;
};

namespace detail {
struct Node {
  AnalyticFn::Variant v;
};
}  // namespace detail

inline AnalyticFn::AnalyticFn() : node_(std::make_shared<detail::Node>(detail::Node{Polynomial{{0}}})) {}
inline AnalyticFn::AnalyticFn(Variant v) : node_(std::make_shared<detail::Node>(detail::Node{std::move(v)})) {}
inline const AnalyticFn::Variant& AnalyticFn::node() const { return node_->v; }

inline AnalyticFn AnalyticFn::kernel(real m, cplx lambda, SpaceParams params) {
  params.validate();
  require_in_disk(lambda, "Kernel");
  if (!(m >= 0) || m != std::floor(m)) throw domain_error("Kernel: m must be a nonnegative integer");
  return AnalyticFn(Kernel{m, lambda, params});
}

/**
 * Jet of the modified kernel K_{m,lambda} at z, evaluated in log domain.
 *
 * log K = (m+1) log1p(conj(l)(z-l)/(1-conj(l)z)) - s log(1-conj(l)z) with
 * s = (2+alpha)/p, which stays exact at z == lambda for any m. Taylor
 * coefficients follow from K^(k)/k! = (m~)_k/k! q^k K, q = conj(l)/(1-conj(l)z).
 */
inline Jet kernel_jet(real m, cplx lambda, const SpaceParams& params, cplx z, std::size_t order) {
  if (lambda == cplx{0}) return Jet::constant(1, order);
  const cplx lb = std::conj(lambda);
  const cplx one_minus = cplx{1} - lb * z;
  const cplx w = lb * (z - lambda) / one_minus;
  const cplx log_k = (m + 1) * bergman::log1p(w) - params.shift() * std::log(one_minus);
  const real shifted = m + (1 + params.shift());
  const cplx q = lb / one_minus;
  std::vector<cplx> c(order + 1);
  c[0] = std::polar(real(1), log_k.imag());
  for (std::size_t k = 1; k <= order; ++k) {
    c[k] = c[k - 1] * ((shifted + real(k - 1)) / real(k)) * q;
  }
  return Jet(std::move(c), log_k.real());
}

namespace detail {

// p(z + t) coefficients by repeated synthetic division.
inline Jet polynomial_jet(const std::vector<cplx>& a, cplx z, std::size_t order) {
  std::vector<cplx> b = a;
  std::vector<cplx> c(order + 1, cplx{0});
  for (std::size_t k = 0; k <= order && !b.empty(); ++k) {
    cplx acc = 0;
    std::vector<cplx> q(b.size() > 1 ? b.size() - 1 : 0);
    for (std::size_t i = b.size(); i-- > 0;) {
      acc = acc * z + b[i];
      if (i > 0) q[i - 1] = acc;
    }
    c[k] = acc;
    b = std::move(q);
  }
  return Jet(std::move(c), 0);
}

}  // namespace detail

inline Jet AnalyticFn::jet(cplx z, std::size_t order) const {
  require_in_disk(z, "eval_jet");
  if (order > kMaxJetOrder) throw domain_error("eval_jet: order exceeds the jet order cap");
  return jet_at(z, order, "");
}

inline Jet AnalyticFn::jet_at(cplx z, std::size_t order, const std::string& path) const {
  struct Visitor {
    cplx z;
    std::size_t order;
    const std::string& path;

    Jet operator()(const Polynomial& p) const { return detail::polynomial_jet(p.coeffs, z, order); }
    Jet operator()(const Kernel& k) const { return kernel_jet(k.m, k.lambda, k.params, z, order); }
    Jet operator()(const Blaschke& b) const { return b.product.jet(z, order); }
    Jet operator()(const Mobius& m) const { return m.map.jet(z, order); }
    Jet operator()(const PreCompose& pc) const {
      const Jet inner = pc.inner.jet(z, order);
      const cplx w = inner.taylor(0);
      return pc.outer[0].jet_at(w, order, path + "/precompose").compose(inner);
    }
    Jet operator()(const Compose& c) const {
      const Jet inner = c.parts[0].jet_at(z, order, path + "/compose.inner");
      const cplx w = inner.taylor(0);
      if (!(std::abs(w) < 1)) {
        throw numeric_error("node " + path + "/compose: inner function leaves the unit disk");
      }
      return c.parts[1].jet_at(w, order, path + "/compose.outer").compose(inner);
    }
    Jet operator()(const Scale& s) const { return s.child[0].jet_at(z, order, path + "/scale") * s.factor; }
    Jet operator()(const Sum& s) const {
      Jet acc = Jet::zero(order);
      for (std::size_t i = 0; i < s.terms.size(); ++i)
        acc = acc + s.terms[i].jet_at(z, order, path + "/sum[" + std::to_string(i) + "]");
      return acc;
    }
    Jet operator()(const Product& p) const {
      Jet acc = Jet::constant(1, order);
      for (std::size_t i = 0; i < p.factors.size(); ++i)
        acc = acc * p.factors[i].jet_at(z, order, path + "/product[" + std::to_string(i) + "]");
      return acc;
    }
    Jet operator()(const Quotient& q) const {
      const Jet num = q.parts[0].jet_at(z, order, path + "/quotient.num");
      const Jet den = q.parts[1].jet_at(z, order, path + "/quotient.den");
      if (den.is_zero() || den.coefficients()[0] == cplx{0}) {
        throw numeric_error("node " + path + "/quotient: denominator vanishes");
      }
      return num / den;
    }
  };
  try {
    return std::visit(Visitor{z, order, path}, node());
  } catch (const numeric_error& e) {
    const std::string msg = e.what();
    if (msg.rfind("node ", 0) == 0) throw;
    throw numeric_error("node " + (path.empty() ? std::string("/") : path) + ": " + msg);
  }
}

/// Derivatives f(z), f'(z), ..., f^(order)(z) as ordinary numbers.
inline std::vector<cplx> eval_jet(const AnalyticFn& f, cplx z, std::size_t order) {
  return f.jet(z, order).derivatives();
}

}  // namespace bergman

#endif  // BERGMAN_ANALYTIC_FN_HPP_
