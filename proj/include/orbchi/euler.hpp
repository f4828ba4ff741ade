#pragma once

#include <vector>

#include "orbchi/gset.hpp"
#include "orbchi/hom.hpp"
#include "orbchi/rational.hpp"
#include "orbchi/ring.hpp"

namespace orbchi {

/// chi^(A)(X, G) = (1/|G|) * sum over homs A -> G of the size of the fixed
/// set of the image subgroup. Exact rational; X is finite, so the Euler
/// characteristic of a fixed set is its cardinality. Sources with a free
/// factor always yield integers; that is asserted here.
inline Rational chi_direct(const FgGroupSpec& a, const GSet& x,
                           long long budget_limit = kDefaultBudget) {
  const FiniteGroup& g = x.group();
  HomSet hs = enumerate_homs(a, g, budget_limit);
  long long total = 0;
  for (std::size_t i = 0; i < hs.images.size(); ++i)
    total += x.fixed_mask(hs.image_generators(i)).count();
  Rational value(total, g.order());
  const bool has_free_factor = a.kind() == FgGroupSpec::Kind::FreeAbelian ||
                               a.kind() == FgGroupSpec::Kind::ProductWithFree;
  if (has_free_factor && !value.is_integer())
    throw IntegralityError("chi with a free factor came out fractional: " + value.str());
  return value;
}

/// The product recursion: chi^(A1 x A2)(X, G) as a sum over conjugation
/// classes [phi] of Hom(A1, G) of chi^(A2)(X^phi, C_G(im phi)).
inline Rational chi_recursive(const FgGroupSpec& a1, const FgGroupSpec& a2, const GSet& x,
                              long long budget_limit = kDefaultBudget) {
  const FiniteGroup& g = x.group();
  HomSet hs = enumerate_homs(a1, g, budget_limit);
  const auto& inner = g.automorphism_images(Omega::Inner);
  Rational sum;
  for (std::size_t rep : detail::orbit_representatives(hs.images, inner)) {
    std::vector<int> gens = hs.image_generators(rep);
    std::vector<int> fixed = x.fixed_mask(gens).elements();
    Subgroup cent = g.centralizer_of(gens);
    GSet sub = x.restrict_to_subgroup(cent, fixed);
    sum += chi_direct(a2, sub, budget_limit);
  }
  return sum;
}

/// Higher-order characteristic, averaged form: commuting (k+1)-tuples for
/// k >= 0; the k = -1 case is the empty-tuple reading chi(X)/|G|
/// (the Euler-Satake value).
inline Rational chi_higher_averaged(int k, const GSet& x,
                                    long long budget_limit = kDefaultBudget) {
  if (k < -1) throw DomainError("order must be at least -1");
  if (k == -1) return Rational(x.size(), x.group().order());
  return chi_direct(FgGroupSpec::free_abelian(k + 1), x, budget_limit);
}

/// Higher-order characteristic, recurrent form: sum over conjugacy classes
/// [g] of chi^(k-1)(X^<g>, C_G(g)), grounded at the same k = -1 convention.
inline Rational chi_higher_recurrent(int k, const GSet& x,
                                     long long budget_limit = kDefaultBudget) {
  if (k < -1) throw DomainError("order must be at least -1");
  const FiniteGroup& g = x.group();
  if (k == -1) return Rational(x.size(), g.order());
  Rational sum;
  for (const auto& cls : g.conjugacy_classes()) {
    const int rep = cls[0];
    std::vector<int> fixed = x.fixed_mask({rep}).elements();
    Subgroup cent = g.centralizer_of({rep});
    GSet sub = x.restrict_to_subgroup(cent, fixed);
    sum += chi_higher_recurrent(k - 1, sub, budget_limit);
  }
  return sum;
}

/// chi^(A) extended linearly over the ring: each basis class contributes its
/// one-point-set value chi^(A)(G/G, G) = |Hom(A, G)| / |G|.
inline Rational chi_on_ring(const FgGroupSpec& a, const RingElement& r,
                            long long budget_limit = kDefaultBudget) {
  Rational sum;
  for (const auto& [key, coeff] : r.terms()) {
    FiniteGroup g = key.representative();
    sum += Rational(coeff) * chi_direct(a, GSet::one_point(g), budget_limit);
  }
  return sum;
}

/// chi^(A)(X1 x X2, G1 x G2) = chi^(A)(X1, G1) * chi^(A)(X2, G2).
inline bool multiplicativity_holds(const FgGroupSpec& a, const GSet& x1, const GSet& x2,
                                   long long budget_limit = kDefaultBudget) {
  Rational lhs = chi_direct(a, gset_product(x1, x2), budget_limit);
  Rational rhs = chi_direct(a, x1, budget_limit) * chi_direct(a, x2, budget_limit);
  return lhs == rhs;
}

}  // namespace orbchi
