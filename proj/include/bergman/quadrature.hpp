#ifndef BERGMAN_QUADRATURE_HPP_
#define BERGMAN_QUADRATURE_HPP_

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "bergman/core.hpp"

namespace bergman::quad {

struct Rule {
  std::vector<real> nodes;
  std::vector<real> weights;
};

/**
 * Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^a (1+x)^b, a, b > -1,
 * by Golub-Welsch on the Jacobi-matrix of the three-term recurrence.
 */
inline Rule gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw domain_error("gauss_jacobi: need at least one node");
  if (!(a > -1 && b > -1)) throw domain_error("gauss_jacobi: exponents must exceed -1");
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off(n > 1 ? n - 1 : 1);
  const double ab = a + b;
  diag(0) = (b - a) / (ab + 2);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = (b * b - a * a) / (s * (s + 2));
    const double num = 4.0 * k * (k + a) * (k + b) * (k + ab);
    const double den = s * s * (s + 1) * (s - 1);
    off(k - 1) = std::sqrt(num / den);
  }
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double mu0 = std::exp((ab + 1) * std::log(2.0) + std::lgamma(a + 1) + std::lgamma(b + 1) -
                              std::lgamma(ab + 2));
  if (n == 1) {
    r.nodes[0] = diag(0);
    r.weights[0] = mu0;
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off.head(n - 1), Eigen::ComputeEigenvectors);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    r.weights[i] = mu0 * v0 * v0;
  }
  return r;
}

inline Rule gauss_legendre(int n, real lo, real hi) {
  Rule r = gauss_jacobi(n, 0, 0);
  const real half = (hi - lo) / 2;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    r.nodes[i] = lo + half * (r.nodes[i] + 1);
    r.weights[i] *= half;
  }
  return r;
}

/// Nodes t in [0, 1] for the probability measure (1+alpha)(1-t)^alpha dt.
/// With t = r^2 this is the radial part of dA_alpha.
inline const Rule& radial_rule(int n, real alpha) {
  static std::mutex mu;
  static std::map<std::pair<int, double>, Rule> cache;
  const std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(n, static_cast<double>(alpha));
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  Rule r = gauss_jacobi(n, static_cast<double>(alpha), 0);
  real total = 0;
  for (auto w : r.weights) total += w;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    r.nodes[i] = (r.nodes[i] + 1) / 2;
    r.weights[i] /= total;
  }
  return cache.emplace(key, std::move(r)).first->second;
}

/// Uniform angles 2 pi j / n with equal weights 1/n (exact for trigonometric
/// polynomials of degree < n).
inline Rule angular_rule(int n, real offset = 0) {
  Rule r;
  r.nodes.resize(n);
  r.weights.assign(n, real(1) / n);
  for (int j = 0; j < n; ++j) r.nodes[j] = offset + 2 * kPi * j / n;
  return r;
}

/// Pairwise (cascade) summation: deterministic order, O(log n) error growth.
inline real pairwise_sum(const std::vector<real>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    real s = 0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}
inline real pairwise_sum(const std::vector<real>& v) { return pairwise_sum(v, 0, v.size()); }

/// log(sum exp(v_i)) with a single max shift.
inline real log_sum_exp(const std::vector<real>& v) {
  real hi = kNegInf;
  for (auto x : v) hi = std::max(hi, x);
  if (hi == kNegInf || hi == kInf) return hi;
  std::vector<real> e(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) e[i] = std::exp(v[i] - hi);
  return hi + std::log(pairwise_sum(e));
}

}  // namespace bergman::quad

#endif  // BERGMAN_QUADRATURE_HPP_
