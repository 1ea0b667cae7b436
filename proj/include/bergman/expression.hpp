#ifndef BERGMAN_EXPRESSION_HPP_
#define BERGMAN_EXPRESSION_HPP_

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "bergman/analytic_fn.hpp"

namespace bergman {

class parse_error : public domain_error {
 public:
  parse_error(const std::string& msg, std::size_t pos)
      : domain_error("parse error at column " + std::to_string(pos + 1) + ": " + msg), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

namespace detail {

// Constants are folded; anything touching z becomes an AnalyticFn.
struct ExprValue {
  bool is_const = true;
  cplx c = 0;
  AnalyticFn f;

  AnalyticFn fn() const { return is_const ? AnalyticFn::constant(c) : f; }
  static ExprValue constant(cplx c) { return {true, c, {}}; }
  static ExprValue function(AnalyticFn f) { return {false, 0, std::move(f)}; }
};

inline const AnalyticFn::Polynomial* as_polynomial(const AnalyticFn& f) {
  return std::get_if<AnalyticFn::Polynomial>(&f.node());
}

inline std::vector<cplx> poly_coeffs(const ExprValue& v) {
  if (v.is_const) return {v.c};
  return as_polynomial(v.f)->coeffs;
}

inline bool is_poly(const ExprValue& v) { return v.is_const || as_polynomial(v.f) != nullptr; }

inline ExprValue make_poly(std::vector<cplx> c) {
  while (c.size() > 1 && c.back() == cplx{0}) c.pop_back();
  if (c.size() == 1) return ExprValue::constant(c[0]);
  return ExprValue::function(AnalyticFn::polynomial(std::move(c)));
}

inline ExprValue add(const ExprValue& a, const ExprValue& b, int sign) {
  if (is_poly(a) && is_poly(b)) {
    auto x = poly_coeffs(a);
    const auto y = poly_coeffs(b);
    if (y.size() > x.size()) x.resize(y.size(), 0);
    for (std::size_t i = 0; i < y.size(); ++i) x[i] += real(sign) * y[i];
    return make_poly(std::move(x));
  }
  const AnalyticFn rhs = sign > 0 ? b.fn() : AnalyticFn::scale(-1, b.fn());
  return ExprValue::function(AnalyticFn::sum({a.fn(), rhs}));
}

// c z^k: products with a monomial expand exactly.
inline bool is_monomial(const ExprValue& v) {
  if (!is_poly(v)) return false;
  const auto c = poly_coeffs(v);
  std::size_t nonzero = 0;
  for (const cplx& x : c) nonzero += x != cplx{0};
  return nonzero <= 1;
}

// Products of general polynomials stay factored: expanding (1-z)^5 would
// cancel catastrophically near z = 1.
inline ExprValue multiply(const ExprValue& a, const ExprValue& b) {
  if (is_poly(a) && is_poly(b) && (is_monomial(a) || is_monomial(b))) {
    const auto x = poly_coeffs(a), y = poly_coeffs(b);
    std::vector<cplx> out(x.size() + y.size() - 1, 0);
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < y.size(); ++j) out[i + j] += x[i] * y[j];
    return make_poly(std::move(out));
  }
  if (a.is_const) return ExprValue::function(AnalyticFn::scale(a.c, b.f));
  if (b.is_const) return ExprValue::function(AnalyticFn::scale(b.c, a.f));
  std::vector<AnalyticFn> factors;
  for (const AnalyticFn* f : {&a.f, &b.f}) {
    if (const auto* p = std::get_if<AnalyticFn::Product>(&f->node())) {
      factors.insert(factors.end(), p->factors.begin(), p->factors.end());
    } else {
      factors.push_back(*f);
    }
  }
  return ExprValue::function(AnalyticFn::product(std::move(factors)));
}

inline ExprValue divide(const ExprValue& a, const ExprValue& b, std::size_t pos) {
  if (b.is_const) {
    if (b.c == cplx{0}) throw parse_error("division by zero", pos);
    return multiply(a, ExprValue::constant(cplx{1} / b.c));
  }
  return ExprValue::function(AnalyticFn::quotient(a.fn(), b.f));
}

class Parser {
 public:
  Parser(const std::string& src, const SpaceParams& params) : s_(src), params_(params) {}

  ExprValue parse() {
    ExprValue v = expr();
    skip();
    if (pos_ != s_.size()) throw parse_error(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return v;
  }

 private:
  const std::string& s_;
  SpaceParams params_;
  std::size_t pos_ = 0;

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) throw parse_error(std::string("expected '") + c + "'", pos_);
  }
  bool starts_primary() {
    skip();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '(';
  }

  ExprValue expr() {
    ExprValue v = term();
    while (true) {
      if (accept('+')) {
        v = add(v, term(), 1);
      } else if (accept('-')) {
        v = add(v, term(), -1);
      } else {
        return v;
      }
    }
  }

  ExprValue term() {
    ExprValue v = unary();
    while (true) {
      skip();
      const std::size_t at = pos_;
      if (accept('*')) {
        v = multiply(v, unary());
      } else if (accept('/')) {
        v = divide(v, unary(), at);
      } else if (starts_primary()) {
        v = multiply(v, power());
      } else {
        return v;
      }
    }
  }

  ExprValue unary() {
    if (accept('-')) return multiply(ExprValue::constant(-1), unary());
    if (accept('+')) return unary();
    return power();
  }

  ExprValue power() {
    ExprValue base = primary();
    if (!accept('^')) return base;
    skip();
    const std::size_t at = pos_;
    bool negative = accept('-');
    skip();
    std::size_t end = pos_;
    while (end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[end]))) ++end;
    if (end == pos_ || (end < s_.size() && (s_[end] == '.' || s_[end] == 'e' || s_[end] == 'E')))
      throw parse_error("exponent must be an integer", at);
    const long n = std::strtol(s_.substr(pos_, end - pos_).c_str(), nullptr, 10);
    pos_ = end;
    if (n > 64) throw parse_error("exponent too large", at);
    ExprValue out = ExprValue::constant(1);
    for (long i = 0; i < n; ++i) out = multiply(out, base);
    return negative ? divide(ExprValue::constant(1), out, at) : out;
  }

  real number() {
    skip();
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const real x = std::strtold(begin, &end);
    if (end == begin) throw parse_error("expected a number", pos_);
    pos_ += static_cast<std::size_t>(end - begin);
    return x;
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  std::vector<ExprValue> arguments() {
    std::vector<ExprValue> args;
    expect('(');
    if (accept(')')) return args;
    do {
      args.push_back(expr());
    } while (accept(','));
    expect(')');
    return args;
  }

  static cplx constant_arg(const ExprValue& v, std::size_t pos, const char* what) {
    if (!v.is_const) throw parse_error(std::string(what) + " must be a constant", pos);
    return v.c;
  }

  static real real_arg(const ExprValue& v, std::size_t pos, const char* what) {
    const cplx c = constant_arg(v, pos, what);
    if (c.imag() != 0) throw parse_error(std::string(what) + " must be real", pos);
    return c.real();
  }

  static cplx disk_arg(const ExprValue& v, std::size_t pos, const char* what) {
    const cplx c = constant_arg(v, pos, what);
    if (!(std::abs(c) < 1)) throw parse_error(std::string(what) + " must lie in the open unit disk", pos);
    return c;
  }

  ExprValue call(const std::string& name, std::size_t at) {
    const std::vector<ExprValue> args = arguments();
    try {
      if (name == "kernel") {
        if (args.size() != 2 && args.size() != 4) throw parse_error("kernel takes (m, lambda) or (m, lambda, p, alpha)", at);
        const real m = real_arg(args[0], at, "kernel order");
        if (!(m >= 0) || m != std::floor(m)) throw parse_error("kernel order must be a nonnegative integer", at);
        SpaceParams sp = params_;
        if (args.size() == 4) sp = SpaceParams{real_arg(args[2], at, "p"), real_arg(args[3], at, "alpha")};
        sp.validate();
        return ExprValue::function(AnalyticFn::kernel(m, disk_arg(args[1], at, "kernel point"), sp));
      }
      if (name == "blaschke") {
        std::vector<BlaschkeProduct::Zero> zeros;
        for (const auto& a : args) {
          const cplx p = disk_arg(a, at, "Blaschke zero");
          if (!zeros.empty() && zeros.back().point == p) {
            ++zeros.back().multiplicity;
          } else {
            zeros.push_back({p, 1});
          }
        }
        return ExprValue::function(AnalyticFn::blaschke(BlaschkeProduct(std::move(zeros))));
      }
      if (name == "mobius") {
        if (args.size() != 1 && args.size() != 2) throw parse_error("mobius takes (a) or (a, rotation)", at);
        const cplx a = disk_arg(args[0], at, "mobius point");
        const cplx rot = args.size() == 2 ? constant_arg(args[1], at, "rotation") : cplx{1};
        return ExprValue::function(AnalyticFn::mobius(MobiusMap(a, rot)));
      }
      if (name == "compose") {
        if (args.size() != 2) throw parse_error("compose takes (inner, outer)", at);
        const AnalyticFn inner = args[0].fn();
        if (const auto* mob = std::get_if<AnalyticFn::Mobius>(&inner.node()))
          return ExprValue::function(AnalyticFn::precompose(mob->map, args[1].fn()));
        return ExprValue::function(AnalyticFn::compose(inner, args[1].fn()));
      }
    } catch (const parse_error&) {
      throw;
    } catch (const std::exception& e) {
      throw parse_error(e.what(), at);
    }
    throw parse_error("unknown function '" + name + "'", at);
  }

  ExprValue primary() {
    skip();
    if (pos_ >= s_.size()) throw parse_error("unexpected end of expression", pos_);
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      ExprValue v = expr();
      expect(')');
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const real x = number();
      if (pos_ < s_.size() && s_[pos_] == 'i' &&
          !(pos_ + 1 < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
        ++pos_;
        return ExprValue::constant(cplx{0, x});
      }
      return ExprValue::constant(x);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t at = pos_;
      const std::string id = identifier();
      if (id == "z") return make_poly({0, 1});
      if (id == "i") return ExprValue::constant(cplx{0, 1});
      if (id == "inf") return ExprValue::constant(kInf);
      return call(id, at);
    }
    throw parse_error(std::string("unexpected '") + c + "'", pos_);
  }
};

// Shortest %g form that reads back to the same value.
inline std::string shortest(real x, bool plus = false) {
  char buf[64];
  for (int prec = 17; prec <= 21; ++prec) {
    std::snprintf(buf, sizeof buf, plus ? "%+.*Lg" : "%.*Lg", prec, x);
    if (std::strtold(buf, nullptr) == x) break;
  }
  return buf;
}

inline std::string format_real(real x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "(-inf)";
  const std::string s = shortest(x);
  return x < 0 ? "(" + s + ")" : s;
}

inline std::string format_complex(cplx c) {
  if (c.imag() == 0) return format_real(c.real());
  return "(" + shortest(c.real()) + shortest(c.imag(), true) + "i)";
}

}  // namespace detail

/// Parses symbols such as "1/(1-z)", "0.5z^2 + (0.1+0.2i)", "kernel(3, 0.5i)",
/// "blaschke(0.5, -0.5)", "mobius(0.3)" and "compose(mobius(0.3), z^2)".
/// kernel() without explicit (p, alpha) uses `params`.
inline AnalyticFn parse_expression(const std::string& src, const SpaceParams& params = {}) {
  return detail::Parser(src, params).parse().fn();
}

/// Text form accepted by parse_expression.
inline std::string to_expression(const AnalyticFn& f) {
  using detail::format_complex;
  using detail::format_real;
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AnalyticFn::Polynomial>) {
          std::string out;
          for (std::size_t k = 0; k < n.coeffs.size(); ++k) {
            if (n.coeffs[k] == cplx{0}) continue;
            if (!out.empty()) out += " + ";
            const std::string zk = k == 0 ? "" : k == 1 ? "z" : "z^" + std::to_string(k);
            if (k > 0 && n.coeffs[k] == cplx{1}) {
              out += zk;
            } else {
              out += format_complex(n.coeffs[k]) + (k > 0 ? "*" + zk : "");
            }
          }
          return out.empty() ? "0" : out;
        } else if constexpr (std::is_same_v<T, AnalyticFn::Kernel>) {
          return "kernel(" + format_real(n.m) + ", " + format_complex(n.lambda) + ", " + format_real(n.params.p) +
                 ", " + format_real(n.params.alpha) + ")";
        } else if constexpr (std::is_same_v<T, AnalyticFn::Blaschke>) {
          std::string out = "blaschke(";
          bool first = true;
          for (const auto& zr : n.product.zeros())
            for (unsigned j = 0; j < zr.multiplicity; ++j) {
              out += (first ? "" : ", ") + format_complex(zr.point);
              first = false;
            }
          return out + ")";
        } else if constexpr (std::is_same_v<T, AnalyticFn::Mobius>) {
          return "mobius(" + format_complex(n.map.center()) + ", " + format_complex(n.map.rotation()) + ")";
        } else if constexpr (std::is_same_v<T, AnalyticFn::PreCompose>) {
          return "compose(mobius(" + format_complex(n.inner.center()) + ", " + format_complex(n.inner.rotation()) +
                 "), " + to_expression(n.outer[0]) + ")";
        } else if constexpr (std::is_same_v<T, AnalyticFn::Compose>) {
          return "compose(" + to_expression(n.parts[0]) + ", " + to_expression(n.parts[1]) + ")";
        } else if constexpr (std::is_same_v<T, AnalyticFn::Scale>) {
          return format_complex(n.factor) + "*(" + to_expression(n.child[0]) + ")";
        } else if constexpr (std::is_same_v<T, AnalyticFn::Sum>) {
          std::string out;
          for (const auto& t : n.terms) out += (out.empty() ? "(" : " + (") + to_expression(t) + ")";
          return out.empty() ? "0" : out;
        } else if constexpr (std::is_same_v<T, AnalyticFn::Product>) {
          std::string out;
          for (const auto& t : n.factors) out += (out.empty() ? "(" : "*(") + to_expression(t) + ")";
          return out.empty() ? "1" : out;
        } else {
          return "(" + to_expression(n.parts[0]) + ")/(" + to_expression(n.parts[1]) + ")";
        }
      },
      f.node());
}

}  // namespace bergman

#endif  // BERGMAN_EXPRESSION_HPP_
