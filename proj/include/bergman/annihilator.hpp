#ifndef BERGMAN_ANNIHILATOR_HPP_
#define BERGMAN_ANNIHILATOR_HPP_

#include <algorithm>
#include <string>
#include <vector>

#include "bergman/analytic_fn.hpp"
#include "bergman/core.hpp"
#include "bergman/disk_geometry.hpp"

namespace bergman {

struct Annihilator {
  AnalyticFn fn;
  real sup_estimate = 1;          // max |h| sampled near the unit circle
  real log_abs_leibniz_det = 0;   // (N+1) log |B~(0)|
  real min_abs_far_image = 1;     // min |B(phi(w_j))|
  std::vector<cplx> poly;         // polynomial correction, ascending powers
};

namespace detail {

inline std::vector<cplx> distinct_points(const std::vector<cplx>& pts) {
  std::vector<cplx> out;
  for (const cplx& p : pts)
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  return out;
}

inline real sample_sup(const AnalyticFn& f, int samples) {
  real best = 0;
  const real r = 1 - 1e-12L;
  for (int j = 0; j < samples; ++j) best = std::max(best, std::abs(f(std::polar(r, 2 * kPi * j / samples))));
  return best;
}

}  // namespace detail

/**
 * h with h^(n)(z_j) = delta_{0n} on the cluster and h^(n)(w_j) = 0 on the far
 * set, 0 <= n <= N.
 *
 * cluster[0] is the base point z_1. With phi the automorphism sending z_1 to 0,
 * B the Blaschke product with simple zeros at the distinct phi(z_j), and B~ the
 * one with zeros of order N+1 at the distinct B(phi(w_j)),
 * h = (B~ P) o B o phi where P is the degree-N polynomial with
 * B~ P = 1 + O(w^(N+1)) (a lower-triangular Leibniz system with diagonal B~(0)).
 */
inline Annihilator build_annihilator(const std::vector<cplx>& cluster, const std::vector<cplx>& far, int n, real c,
                                     real eps) {
  if (cluster.empty()) throw domain_error("build_annihilator: cluster must contain the base point");
  if (n < 0 || static_cast<std::size_t>(n) > kMaxJetOrder) throw domain_error("build_annihilator: N out of range");
  if (!(c > 1) || !(eps > 0)) throw domain_error("build_annihilator: requires c > 1 and epsilon > 0");
  for (const cplx& z : cluster) require_in_disk(z, "build_annihilator");
  for (const cplx& w : far) require_in_disk(w, "build_annihilator");
  const cplx base = cluster[0];
  for (const cplx& z : cluster)
    if (pseudo_distance(z, base) > eps * (1 + 1e-15L)) throw domain_error("build_annihilator: cluster point farther than epsilon");
  for (const cplx& w : far)
    if (pseudo_distance(w, base) < c * eps * (1 - 1e-15L)) throw domain_error("build_annihilator: far point closer than c*epsilon");

  Annihilator out;
  if (far.empty()) {
    out.fn = AnalyticFn::constant(1);
    out.poly = {1};
    return out;
  }

  const MobiusMap phi(base);
  std::vector<cplx> mapped_cluster;
  for (const cplx& z : cluster) mapped_cluster.push_back(phi(z));
  mapped_cluster = detail::distinct_points(mapped_cluster);
  std::vector<BlaschkeProduct::Zero> bz;
  for (const cplx& a : mapped_cluster) bz.push_back({a, 1});
  const BlaschkeProduct b(bz);

  // Each cluster zero a has rho(a, 0) <= eps and each mapped far point u has
  // rho(u, 0) >= c eps, so |B(u)| = prod rho(u, a) >= ((c-1) eps)^#zeros.
  const real floor_bound = std::pow(eps * (c - 1) / 2, real(mapped_cluster.size()));
  std::vector<cplx> far_images;
  out.min_abs_far_image = 1;
  for (const cplx& w : far) {
    const cplx v = b(phi(w));
    out.min_abs_far_image = std::min(out.min_abs_far_image, std::abs(v));
    if (!(std::abs(v) >= floor_bound)) {
      throw numeric_error("build_annihilator: far point maps too close to 0 (|B| = " +
                          std::to_string(static_cast<double>(std::abs(v))) + ")");
    }
    far_images.push_back(v);
  }
  far_images = detail::distinct_points(far_images);
  std::vector<BlaschkeProduct::Zero> tz;
  for (const cplx& v : far_images) tz.push_back({v, static_cast<unsigned>(n + 1)});
  const BlaschkeProduct bt(tz);

  // sum_{i <= j} bt_(j-i) g_i = delta_(j0), bt_k = Taylor coefficients of B~ at 0.
  const Jet bt_jet = bt.jet(0, n);
  std::vector<cplx> t(n + 1);
  for (int k = 0; k <= n; ++k) t[k] = bt_jet.taylor(k);
  if (t[0] == cplx{0}) throw singular_matrix_error("build_annihilator: B~(0) vanishes");
  std::vector<cplx> g(n + 1);
  for (int j = 0; j <= n; ++j) {
    cplx acc = j == 0 ? cplx{1} : cplx{0};
    for (int i = 0; i < j; ++i) acc -= t[j - i] * g[i];
    g[j] = acc / t[0];
  }
  out.poly = g;
  out.log_abs_leibniz_det = (n + 1) * std::log(std::abs(t[0]));

  const AnalyticFn outer = AnalyticFn::product({AnalyticFn::blaschke(bt), AnalyticFn::polynomial(g)});
  out.fn = AnalyticFn::precompose(phi, AnalyticFn::compose(AnalyticFn::blaschke(b), outer));
  // B o phi maps the disk onto itself, so sup |h| = sup |B~ P|.
  out.sup_estimate = detail::sample_sup(outer, 4096);
  return out;
}

}  // namespace bergman

#endif  // BERGMAN_ANNIHILATOR_HPP_
