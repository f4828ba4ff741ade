#include <doctest.h>

#include <random>

#include "orbchi/catalog.hpp"
#include "orbchi/ring.hpp"

using namespace orbchi;

namespace {
const FiniteGroup& cat(const char* name) { return catalog_find(name)->group; }

Subgroup order2_subgroup(const FiniteGroup& g) {
  for (const auto& s : g.all_subgroups())
    if (s.order() == 2) return s;
  throw std::runtime_error("no order-2 subgroup");
}
}  // namespace

TEST_CASE("ring arithmetic") {
  RingElement a = RingElement::generator(cat("S3")) - 2 * RingElement::generator(cat("Z4"));
  CHECK(a + RingElement::zero() == a);
  CHECK(a.multiply(RingElement::one()) == a);
  CHECK(a - a == RingElement::zero());

  CHECK(RingElement::generator(cat("Z2")).multiply(RingElement::generator(cat("Z3"))) ==
        RingElement::generator(cat("Z6")));

  RingElement z2sq = RingElement::generator(cat("Z2")).multiply(RingElement::generator(cat("Z2")));
  CHECK(z2sq == RingElement::generator(cat("Z2xZ2")));
  CHECK(z2sq != RingElement::generator(cat("Z4")));

  // Commutativity and associativity spot checks.
  RingElement x = RingElement::generator(cat("Z2")) + 3 * RingElement::generator(cat("Z3"));
  RingElement y = RingElement::generator(cat("Z4")) - RingElement::one();
  RingElement z = 2 * RingElement::generator(cat("S3"));
  CHECK(x.multiply(y) == y.multiply(x));
  CHECK(x.multiply(y.multiply(z, 96), 96) == x.multiply(y, 96).multiply(z, 96));

  CHECK_THROWS_AS(RingElement::generator(cat("Z16")).multiply(RingElement::generator(cat("Z2"))),
                  CapExceededError);
}

TEST_CASE("universal euler characteristic of basic g-sets") {
  const FiniteGroup& s3 = cat("S3");

  CHECK(universal_euler(GSet::one_point(s3)) == RingElement::generator(s3));
  CHECK(universal_euler(GSet::translation(s3)) == RingElement::one());
  CHECK(universal_euler(GSet::free_copies(cat("Z2"), 1)) == RingElement::one());

  GSet cosets = GSet::coset_space(s3, order2_subgroup(s3));
  CHECK(universal_euler(cosets) == RingElement::generator(cat("Z2")));

  // Coefficients are nonnegative and sum to the orbit count.
  for (const auto& e : small_groups_catalog(8)) {
    GSet x = disjoint_union(GSet::translation(e.group), GSet::one_point(e.group));
    RingElement u = universal_euler(x);
    CHECK(u.coefficient_sum() == x.orbit_count());
    for (const auto& [k, c] : u.terms()) CHECK(c > 0);
  }
}

TEST_CASE("additivity over invariant subsets") {
  const FiniteGroup& s3 = cat("S3");
  GSet reg = GSet::translation(s3);

  CHECK(universal_euler_additive(reg, Bitset(reg.size())));
  CHECK(universal_euler_additive(reg, Bitset::full(reg.size())));

  GSet mixed = disjoint_union(GSet::coset_space(s3, order2_subgroup(s3)), reg);
  // Each orbit union is invariant.
  auto orbits = mixed.orbits();
  Bitset first_orbit(mixed.size());
  for (int p : orbits[0]) first_orbit.insert(p);
  CHECK(universal_euler_additive(mixed, first_orbit));

  Bitset bad(mixed.size());
  bad.insert(0);  // a single point of a 3-point orbit is not invariant
  CHECK_THROWS_AS(universal_euler_additive(mixed, bad), DomainError);
}

TEST_CASE("induction relation in the ring") {
  const FiniteGroup& s3 = cat("S3");
  Subgroup z2 = order2_subgroup(s3);
  Homomorphism emb = z2.embedding();
  GSet pt = GSet::one_point(emb.source());
  CHECK(universal_euler(pt) == RingElement::generator(cat("Z2")));
  CHECK(universal_euler_induction_invariant(pt, s3, emb));
  CHECK(universal_euler(induce(pt, s3, emb)) == RingElement::generator(cat("Z2")));

  for (const char* name : {"D4", "A4", "Z12"}) {
    const FiniteGroup& h = cat(name);
    for (const auto& sub : h.all_subgroups()) {
      Homomorphism e = sub.embedding();
      GSet x = GSet::translation(e.source());
      CHECK(universal_euler_induction_invariant(x, h, e));
    }
  }
}

TEST_CASE("universal euler characteristic is multiplicative") {
  auto catalog = small_groups_catalog(8);
  int checked = 0;
  for (const auto& e1 : catalog)
    for (const auto& e2 : catalog) {
      if (e1.group.order() * e2.group.order() > kDefaultOrderCap) continue;
      GSet x1 = GSet::translation(e1.group);
      GSet x2 = disjoint_union(GSet::one_point(e2.group), GSet::one_point(e2.group));
      if (x1.size() * x2.size() > 24) continue;
      RingElement lhs = universal_euler(gset_product(x1, x2));
      RingElement rhs = universal_euler(x1).multiply(universal_euler(x2));
      CHECK(lhs == rhs);
      ++checked;
    }
  CHECK(checked >= 20);
}

TEST_CASE("polynomial view over indecomposables") {
  PolynomialView v6 = polynomial_view(RingElement::generator(cat("Z6")));
  REQUIRE(v6.monomials.size() == 1);
  const auto& [mono6, c6] = *v6.monomials.begin();
  CHECK(c6 == 1);
  REQUIRE(mono6.size() == 2);
  CHECK(catalog_name_for_key(mono6[0]) == "Z2");
  CHECK(catalog_name_for_key(mono6[1]) == "Z3");

  PolynomialView v4 = polynomial_view(RingElement::generator(cat("Z4")));
  REQUIRE(v4.monomials.size() == 1);
  CHECK(v4.monomials.begin()->first == std::vector<CanonicalKey>{cat("Z4").canonical_key()});

  PolynomialView vu = polynomial_view(RingElement::one());
  REQUIRE(vu.monomials.size() == 1);
  CHECK(vu.monomials.begin()->first.empty());

  // Lossless round-trip on seeded random elements.
  std::mt19937_64 rng(7);
  auto universe = small_groups_catalog(8);
  for (int t = 0; t < 25; ++t) {
    RingElement r;
    for (const auto& e : universe)
      r.add_term(e.group.canonical_key(), static_cast<long long>(rng() % 7) - 3);
    CHECK(polynomial_expand(polynomial_view(r)) == r);
  }
}
