#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "orbchi/group.hpp"
#include "orbchi/gset.hpp"

namespace orbchi {

/// An element of the Grothendieck ring of finite sets with finite group
/// actions: a finite integer combination of isomorphism-class keys, with
/// multiplication induced by direct products of groups. Zero coefficients are
/// never stored; iteration order is (group order, key bytes), so serialized
/// output is deterministic.
class RingElement {
public:
  RingElement() = default;

  static RingElement zero() { return RingElement(); }

  /// The class of the one-point set with trivial group: the ring unit.
  static RingElement one() { return generator(FiniteGroup()); }

  /// The basis element attached to a group's isomorphism class.
  static RingElement generator(const FiniteGroup& g) {
    RingElement r;
    r.c_[g.canonical_key()] = 1;
    return r;
  }

  static RingElement term(const CanonicalKey& key, long long coeff) {
    RingElement r;
    if (coeff != 0) r.c_[key] = coeff;
    return r;
  }

  bool is_zero() const { return c_.empty(); }
  const std::map<CanonicalKey, long long>& terms() const { return c_; }

  long long coefficient(const CanonicalKey& key) const {
    auto it = c_.find(key);
    return it == c_.end() ? 0 : it->second;
  }

  long long coefficient_sum() const {
    long long s = 0;
    for (const auto& [k, v] : c_) s += v;
    return s;
  }

  RingElement& add_term(const CanonicalKey& key, long long coeff) {
    auto it = c_.find(key);
    long long next = (it == c_.end() ? 0 : it->second) + coeff;
    if (next == 0) {
      if (it != c_.end()) c_.erase(it);
    } else if (it == c_.end()) {
      c_.emplace(key, next);
    } else {
      it->second = next;
    }
    return *this;
  }

  friend RingElement operator+(const RingElement& a, const RingElement& b) {
    RingElement r = a;
    for (const auto& [k, v] : b.c_) r.add_term(k, v);
    return r;
  }

  friend RingElement operator-(const RingElement& a, const RingElement& b) {
    RingElement r = a;
    for (const auto& [k, v] : b.c_) r.add_term(k, -v);
    return r;
  }

  RingElement operator-() const {
    RingElement r;
    for (const auto& [k, v] : c_) r.c_[k] = -v;
    return r;
  }

  friend RingElement operator*(long long s, const RingElement& a) {
    RingElement r;
    if (s != 0)
      for (const auto& [k, v] : a.c_) r.c_[k] = s * v;
    return r;
  }

  /// Basis products go through an actual direct product of representative
  /// groups followed by canonical-key normalization. Throws CapExceededError
  /// when a product group would exceed the order cap.
  RingElement multiply(const RingElement& other, int order_cap = kDefaultOrderCap) const {
    RingElement r;
    for (const auto& [ka, va] : c_) {
      for (const auto& [kb, vb] : other.c_) {
        const int prod_order = ka.group_order() * kb.group_order();
        if (prod_order > order_cap)
          throw CapExceededError("product group order " + std::to_string(prod_order) +
                                 " exceeds cap " + std::to_string(order_cap));
        FiniteGroup p = direct_product(ka.representative(), kb.representative());
        r.add_term(p.canonical_key(), va * vb);
      }
    }
    return r;
  }

  friend RingElement operator*(const RingElement& a, const RingElement& b) {
    return a.multiply(b);
  }

  friend bool operator==(const RingElement& a, const RingElement& b) { return a.c_ == b.c_; }
  friend bool operator!=(const RingElement& a, const RingElement& b) { return !(a == b); }

private:
  std::map<CanonicalKey, long long> c_;
};

/// The universal Euler characteristic of a finite G-set: one basis term per
/// orbit, keyed by the isomorphism class of the orbit's isotropy subgroup.
/// Equivalently, the sum over subgroup conjugacy classes [K] of the orbit
/// count of the exact-isotropy stratum times the class generator.
inline RingElement universal_euler(const GSet& x) {
  RingElement r;
  for (const auto& orbit : x.orbits()) {
    auto [k, elems] = x.isotropy(orbit[0]).as_group();
    (void)elems;
    r.add_term(k.canonical_key(), 1);
  }
  return r;
}

/// Checks the cut-and-paste relation: for an invariant subset Y of X,
/// chi_un(X) = chi_un(Y) + chi_un(X \ Y).
inline bool universal_euler_additive(const GSet& x, const Bitset& invariant_subset) {
  if (invariant_subset.universe() != x.size()) throw DomainError("subset universe mismatch");
  for (int p : invariant_subset.elements())
    for (int g = 0; g < x.group().order(); ++g)
      if (!invariant_subset.contains(x.apply(g, p)))
        throw DomainError("subset is not invariant");
  if (invariant_subset.empty())
    return universal_euler(x) == universal_euler(x);  // trivially true
  Bitset comp = invariant_subset.complement();
  RingElement whole = universal_euler(x);
  RingElement part = universal_euler(x.restrict_points(invariant_subset.elements()));
  RingElement rest = comp.empty()
                         ? RingElement::zero()
                         : universal_euler(x.restrict_points(comp.elements()));
  return whole == part + rest;
}

/// Checks the induction relation chi_un(X, G) = chi_un(Ind_G^H X, H).
inline bool universal_euler_induction_invariant(const GSet& x, const FiniteGroup& h,
                                                const Homomorphism& emb,
                                                int size_cap = kDefaultGSetSizeCap) {
  return universal_euler(x) == universal_euler(induce(x, h, emb, size_cap));
}

/// A ring element rewritten over the polynomial generators: each class key is
/// expanded into the multiset of its indecomposable direct factors.
struct PolynomialView {
  /// monomial (sorted multiset of indecomposable keys) -> coefficient
  std::map<std::vector<CanonicalKey>, long long> monomials;

  friend bool operator==(const PolynomialView& a, const PolynomialView& b) {
    return a.monomials == b.monomials;
  }
};

inline PolynomialView polynomial_view(const RingElement& r) {
  PolynomialView v;
  for (const auto& [key, coeff] : r.terms()) {
    std::vector<CanonicalKey> mono;
    for (const auto& [fk, mult] : krull_schmidt_factors(key.representative()))
      for (int i = 0; i < mult; ++i) mono.push_back(fk);
    std::sort(mono.begin(), mono.end());
    v.monomials[mono] += coeff;
  }
  return v;
}

/// Expands a polynomial view back into a ring element (lossless round-trip).
inline RingElement polynomial_expand(const PolynomialView& v) {
  RingElement out;
  for (const auto& [mono, coeff] : v.monomials) {
    FiniteGroup g;  // trivial
    for (const auto& fk : mono) g = direct_product(g, fk.representative());
    out.add_term(g.canonical_key(), coeff);
  }
  return out;
}

}  // namespace orbchi
