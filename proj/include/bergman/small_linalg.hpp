#ifndef BERGMAN_SMALL_LINALG_HPP_
#define BERGMAN_SMALL_LINALG_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

#include "bergman/core.hpp"

namespace bergman {

/// Dense square complex matrix, row-major. Meant for n up to a few dozen.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(std::size_t n) : n_(n), a_(n * n, cplx{0}) {
    if (n == 0) throw domain_error("ComplexMatrix: dimension must be at least 1");
  }
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
      : ComplexMatrix(rows.size()) {
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != n_) throw domain_error("ComplexMatrix: rows must form a square");
      std::size_t j = 0;
      for (const auto& x : row) (*this)(i, j++) = x;
      ++i;
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static ComplexMatrix diagonal(std::span<const cplx> d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t size() const { return n_; }
  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  std::vector<cplx> apply(std::span<const cplx> x) const {
    std::vector<cplx> y(n_, cplx{0});
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }
  std::vector<cplx> apply_adjoint(std::span<const cplx> x) const {
    std::vector<cplx> y(n_, cplx{0});
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) y[j] += std::conj((*this)(i, j)) * x[i];
    return y;
  }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.n_ != b.n_) throw domain_error("ComplexMatrix: dimension mismatch");
    ComplexMatrix c(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t k = 0; k < a.n_; ++k)
        for (std::size_t j = 0; j < a.n_; ++j) c(i, j) += a(i, k) * b(k, j);
    return c;
  }

  bool all_finite() const {
    return std::all_of(a_.begin(), a_.end(), [](cplx x) {
      return std::isfinite(x.real()) && std::isfinite(x.imag());
    });
  }

 private:
  std::size_t n_;
  std::vector<cplx> a_;
};

inline real vector_norm(std::span<const cplx> x) {
  real s = 0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

namespace detail {

// Partial-pivot LU. Flags the matrix singular when a pivot falls below
// 1e-300 times the largest entry.
struct LU {
  ComplexMatrix lu;
  std::vector<std::size_t> perm;
  int sign = 1;
  bool singular = false;

  explicit LU(const ComplexMatrix& a) : lu(a), perm(a.size()) {
    const std::size_t n = a.size();
    real scale = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
    const real threshold = 1e-300L * scale;
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(lu(i, k)) > std::abs(lu(p, k))) p = i;
      if (!(std::abs(lu(p, k)) > threshold)) {
        singular = true;
        return;
      }
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
        std::swap(perm[k], perm[p]);
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        lu(i, k) /= lu(k, k);
        for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= lu(i, k) * lu(k, j);
      }
    }
  }

  std::vector<cplx> solve(std::span<const cplx> b) const {
    const std::size_t n = lu.size();
    std::vector<cplx> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = b[perm[i]];
      for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * x[j];
      x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      cplx s = x[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
      x[i] = s / lu(i, i);
    }
    return x;
  }
};

}  // namespace detail

inline cplx det(const ComplexMatrix& a) {
  const detail::LU f(a);
  if (f.singular) return 0;
  cplx d = real(f.sign);
  for (std::size_t i = 0; i < a.size(); ++i) d *= f.lu(i, i);
  return d;
}

/// log |det A|; -inf when singular. Safe where det itself would overflow.
inline real log_abs_det(const ComplexMatrix& a) {
  const detail::LU f(a);
  if (f.singular) return kNegInf;
  real s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::log(std::abs(f.lu(i, i)));
  return s;
}

inline std::vector<cplx> solve(const ComplexMatrix& a, std::span<const cplx> b) {
  const detail::LU f(a);
  if (f.singular) throw singular_matrix_error("solve: matrix is numerically singular");
  return f.solve(b);
}

inline ComplexMatrix inverse(const ComplexMatrix& a) {
  const detail::LU f(a);
  if (f.singular) throw singular_matrix_error("inverse: matrix is numerically singular");
  const std::size_t n = a.size();
  ComplexMatrix inv(n);
  std::vector<cplx> e(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), cplx{0});
    e[j] = 1;
    const auto col = f.solve(e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

namespace detail {

inline real power_iteration(const ComplexMatrix& a, std::vector<cplx> v) {
  constexpr int kMaxIter = 20000;
  constexpr real kTol = 1e-12L;
  real nv = vector_norm(v);
  for (auto& x : v) x /= nv;
  real mu = 0;
  real residual = kInf;
  for (int it = 0; it < kMaxIter; ++it) {
    const auto av = a.apply(v);
    auto w = a.apply_adjoint(av);
    const real mu_new = vector_norm(av) * vector_norm(av);
    residual = 0;
    for (std::size_t i = 0; i < v.size(); ++i) residual += std::norm(w[i] - mu_new * v[i]);
    residual = std::sqrt(residual);
    const real nw = vector_norm(w);
    if (nw == 0) return 0;  // v lies in the kernel
    // The Rayleigh quotient error is O(residual^2), so a 1e-12 residual is ample;
    // stagnation at rounding level also ends the loop.
    if (residual <= kTol * mu_new || (it > 0 && std::abs(mu_new - mu) <= 1e-18L * mu_new)) {
      return std::sqrt(mu_new);
    }
    mu = mu_new;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] / nw;
  }
  throw convergence_error("operator_norm: power iteration did not converge", residual);
}

}  // namespace detail

/**
 * Largest singular value by power iteration on A^H A.
 *
 * Starts from the normalized all-ones vector and restarts once from a fixed
 * pseudo-random vector; the larger of the two estimates is returned.
 */
inline real operator_norm(const ComplexMatrix& a) {
  const std::size_t n = a.size();
  std::vector<cplx> ones(n, cplx{1});
  real best = detail::power_iteration(a, ones);
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> g;
  std::vector<cplx> r(n);
  for (auto& x : r) x = cplx(g(rng), g(rng));
  best = std::max(best, detail::power_iteration(a, r));
  return best;
}

/// Sum of absolute values of all entries; an upper bound for operator_norm.
inline real l1_entry_norm(const ComplexMatrix& a) {
  real s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) s += std::abs(a(i, j));
  return s;
}

struct InverseNormBound {
  real lhs;  // ||A^-1||
  real rhs;  // ||A||^(n-1) / D
  bool holds;
};

/// ||A^-1|| <= ||A||^(n-1) / D whenever |det A| >= D > 0.
inline InverseNormBound inverse_norm_bound_check(const ComplexMatrix& a, real d) {
  if (!(d > 0)) throw domain_error("inverse_norm_bound_check: D must be positive");
  const real logdet = log_abs_det(a);
  if (logdet < std::log(d) - 1e-12L * std::max<real>(1, std::abs(std::log(d)))) {
    throw domain_error("inverse_norm_bound_check: requires |det A| >= D");
  }
  const real lhs = operator_norm(inverse(a));
  const real rhs = std::pow(operator_norm(a), real(a.size() - 1)) / d;
  return {lhs, rhs, lhs <= rhs * (1 + 1e-10L)};
}

struct HadamardCheck {
  real abs_det;
  real column_product;  // prod ||A e_k|| over the standard basis
  real basis_product;   // prod ||A x_k|| over an orthonormal basis with x_1 = x
  bool holds;
};

/// Orthonormal basis of C^n whose first vector is x / ||x||, completed by
/// Gram-Schmidt against random vectors.
inline std::vector<std::vector<cplx>> orthonormal_basis_containing(std::span<const cplx> x,
                                                                   std::mt19937_64& rng) {
  const std::size_t n = x.size();
  std::normal_distribution<double> g;
  std::vector<std::vector<cplx>> basis;
  std::vector<cplx> first(x.begin(), x.end());
  const real nx = vector_norm(first);
  if (nx == 0) throw domain_error("orthonormal_basis_containing: x must be nonzero");
  for (auto& v : first) v /= nx;
  basis.push_back(std::move(first));
  while (basis.size() < n) {
    std::vector<cplx> v(n);
    for (auto& c : v) c = cplx(g(rng), g(rng));
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        cplx dot = 0;
        for (std::size_t i = 0; i < n; ++i) dot += std::conj(b[i]) * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= dot * b[i];
      }
    }
    const real nv = vector_norm(v);
    if (nv < 1e-8L) continue;
    for (auto& c : v) c /= nv;
    basis.push_back(std::move(v));
  }
  return basis;
}

/// |det A| <= prod ||A x_k|| for the standard basis and for a random orthonormal
/// basis containing `x` (defaults to a random unit vector).
inline HadamardCheck hadamard_check(const ComplexMatrix& a, std::span<const cplx> x = {},
                                    std::uint64_t seed = 1) {
  const std::size_t n = a.size();
  const real ad = std::exp(log_abs_det(a));
  real cols = 1;
  std::vector<cplx> e(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::fill(e.begin(), e.end(), cplx{0});
    e[k] = 1;
    cols *= vector_norm(a.apply(e));
  }
  std::mt19937_64 rng(seed);
  std::vector<cplx> start(x.begin(), x.end());
  if (start.empty()) {
    std::normal_distribution<double> g;
    start.resize(n);
    for (auto& c : start) c = cplx(g(rng), g(rng));
  }
  real basis_prod = 1;
  for (const auto& v : orthonormal_basis_containing(start, rng)) basis_prod *= vector_norm(a.apply(v));
  const bool holds = ad <= cols * (1 + 1e-10L) && ad <= basis_prod * (1 + 1e-10L);
  return {ad, cols, basis_prod, holds};
}

struct GershgorinReport {
  std::vector<real> margins;  // |a_jj| - 1 - sum_{k != j} |a_jk|
  bool all_dominant;
  bool det_lower_bound_ok;    // |det A| >= 1, evaluated only when all_dominant
  real log_abs_det;
};

inline GershgorinReport gershgorin_dominance(const ComplexMatrix& a) {
  const std::size_t n = a.size();
  GershgorinReport r{std::vector<real>(n), true, false, log_abs_det(a)};
  for (std::size_t j = 0; j < n; ++j) {
    real off = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) off += std::abs(a(j, k));
    r.margins[j] = std::abs(a(j, j)) - 1 - off;
    if (!(r.margins[j] > 0)) r.all_dominant = false;
  }
  if (r.all_dominant) r.det_lower_bound_ok = r.log_abs_det >= -1e-15L;
  return r;
}

}  // namespace bergman

#endif  // BERGMAN_SMALL_LINALG_HPP_
