#ifndef BERGMAN_DISK_GEOMETRY_HPP_
#define BERGMAN_DISK_GEOMETRY_HPP_

#include <cstddef>
#include <utility>
#include <vector>

#include "bergman/core.hpp"
#include "bergman/jet.hpp"

namespace bergman {

/// Pseudo-hyperbolic distance |z - w| / |1 - conj(z) w|.
inline real pseudo_distance(cplx z, cplx w) {
  require_in_disk(z, "pseudo_distance");
  require_in_disk(w, "pseudo_distance");
  const cplx den = cplx{1} - std::conj(z) * w;
  return std::abs(z - w) / std::abs(den);
}

/// Rising factorial a (a+1) ... (a+b-1); pochhammer(a, 0) == 1.
inline real pochhammer(real a, unsigned b) {
  real p = 1;
  for (unsigned i = 0; i < b; ++i) p *= a + i;
  return p;
}

/**
 * Disk automorphism z -> rotation * (a - z) / (1 - conj(a) z).
 *
 * With the default rotation this is the involution exchanging a and 0.
 */
class MobiusMap {
 public:
  explicit MobiusMap(cplx a, cplx rotation = 1) : a_(a), rotation_(rotation) {
    require_in_disk(a, "MobiusMap");
    if (std::abs(std::abs(rotation) - 1) > 1e-12L) {
      throw domain_error("MobiusMap: rotation factor must be unimodular");
    }
  }

  cplx center() const { return a_; }
  cplx rotation() const { return rotation_; }

  cplx operator()(cplx z) const {
    require_in_closed_disk(z, "mobius_apply");
    return rotation_ * (a_ - z) / (cplx{1} - std::conj(a_) * z);
  }

  MobiusMap inverse() const {
    // w = u (a - z)/(1 - conj(a) z)  <=>  z = (a - w/u)/(1 - conj(a) w/u);
    // the right side is u' (a' - w)/(1 - conj(a') w) with a' = u a, u' = 1/u.
    return MobiusMap(rotation_ * a_, std::conj(rotation_));
  }

  /// Jet of the map at z.
  Jet jet(cplx z, std::size_t order) const {
    const Jet num = Jet::constant(a_, order) - Jet::variable(z, order);
    const Jet den = Jet::constant(1, order) - Jet::variable(z, order) * std::conj(a_);
    return (num / den) * rotation_;
  }

 private:
  cplx a_;
  cplx rotation_;
};

inline cplx mobius_apply(const MobiusMap& m, cplx z) { return m(z); }

/// Finite Blaschke product; each zero a contributes ((|a|/a)(a - z)/(1 - conj(a) z))^mult,
/// or z^mult when a == 0.
class BlaschkeProduct {
 public:
  struct Zero {
    cplx point;
    unsigned multiplicity;
  };

  BlaschkeProduct() = default;
  explicit BlaschkeProduct(std::vector<Zero> zeros) : zeros_(std::move(zeros)) {
    for (const auto& z : zeros_) {
      require_in_disk(z.point, "BlaschkeProduct");
      if (z.multiplicity == 0) throw domain_error("BlaschkeProduct: multiplicity must be positive");
    }
  }

  const std::vector<Zero>& zeros() const { return zeros_; }
  unsigned degree() const {
    unsigned d = 0;
    for (const auto& z : zeros_) d += z.multiplicity;
    return d;
  }

  Jet jet(cplx z, std::size_t order) const {
    require_in_closed_disk(z, "blaschke_eval_jet");
    Jet acc = Jet::constant(1, order);
    for (const auto& zero : zeros_) {
      const Jet f = factor_jet(zero.point, z, order);
      for (unsigned i = 0; i < zero.multiplicity; ++i) acc = acc * f;
    }
    return acc;
  }

  cplx operator()(cplx z) const { return jet(z, 0).taylor(0); }

 private:
  static Jet factor_jet(cplx a, cplx z, std::size_t order) {
    if (a == cplx{0}) return Jet::variable(z, order);
    const cplx unit = std::abs(a) / a;
    const Jet num = Jet::constant(a, order) - Jet::variable(z, order);
    const Jet den = Jet::constant(1, order) - Jet::variable(z, order) * std::conj(a);
    return (num / den) * unit;
  }

  std::vector<Zero> zeros_;
};

/// Derivatives B(z), B'(z), ..., B^(order)(z).
inline std::vector<cplx> blaschke_eval_jet(const BlaschkeProduct& b, cplx z, std::size_t order) {
  require_in_disk(z, "blaschke_eval_jet");
  return b.jet(z, order).derivatives();
}

}  // namespace bergman

#endif  // BERGMAN_DISK_GEOMETRY_HPP_
