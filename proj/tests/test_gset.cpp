#include <doctest.h>

#include <numeric>

#include "orbchi/catalog.hpp"
#include "orbchi/gset.hpp"
#include "oracles.hpp"

using namespace orbchi;

namespace {
const FiniteGroup& cat(const char* name) { return catalog_find(name)->group; }

Subgroup order2_subgroup(const FiniteGroup& g) {
  for (const auto& s : g.all_subgroups())
    if (s.order() == 2) return s;
  throw std::runtime_error("no order-2 subgroup");
}
}  // namespace

TEST_CASE("fixed point sets") {
  const FiniteGroup& s3 = cat("S3");
  GSet reg = GSet::translation(s3);
  CHECK(reg.fixed_points(s3.trivial_subgroup()).size() == 6);
  for (const auto& k : s3.all_subgroups())
    if (k.order() > 1) CHECK(reg.fixed_points(k).empty());  // free action

  Subgroup k = order2_subgroup(s3);
  GSet cosets = GSet::coset_space(s3, k);
  REQUIRE(cosets.size() == 3);
  CHECK(cosets.fixed_points(k).size() == 1);

  // Monotone decreasing in the subgroup.
  GSet triv5 = GSet::trivial_action(s3, 5);
  CHECK(triv5.fixed_points(s3.whole()).size() == 5);
}

TEST_CASE("isotropy strata partition the set") {
  const FiniteGroup& s3 = cat("S3");

  GSet pt = GSet::one_point(s3);
  for (const auto& cls : s3.subgroup_classes()) {
    auto stratum = pt.stratum_exact(cls);
    if (cls.subgroup_order() == 6)
      CHECK(stratum.size() == 1);
    else
      CHECK(stratum.empty());
  }

  Subgroup k = order2_subgroup(s3);
  GSet cosets = GSet::coset_space(s3, k);
  for (const auto& cls : s3.subgroup_classes())
    if (cls.subgroup_order() == 2)
      CHECK(cosets.stratum_exact(cls).size() == 3);

  GSet reg = GSet::translation(s3);
  CHECK(reg.stratum_exact(s3.subgroup_classes()[0]).size() == 6);  // trivial isotropy class

  // Exact strata partition; containing strata are supersets.
  for (const GSet& x : {reg, cosets, disjoint_union(reg, cosets)}) {
    std::size_t total = 0;
    for (const auto& cls : s3.subgroup_classes()) {
      auto exact = x.stratum_exact(cls);
      auto containing = x.stratum_containing(cls);
      total += exact.size();
      for (int p : exact)
        CHECK(std::find(containing.begin(), containing.end(), p) != containing.end());
    }
    CHECK(total == static_cast<std::size_t>(x.size()));
  }
}

TEST_CASE("orbits and the burnside identity") {
  const FiniteGroup& s3 = cat("S3");
  CHECK(GSet::trivial_action(s3, 4).orbit_count() == 4);
  CHECK(GSet::translation(s3).orbit_count() == 1);
  CHECK(GSet::coset_space(s3, order2_subgroup(s3)).orbit_count() == 1);

  for (const auto& e : small_groups_catalog(8)) {
    for (const auto& cls : e.group.subgroup_classes()) {
      GSet x = GSet::coset_space(e.group, cls.representative());
      CHECK(x.orbit_count() == oracles::burnside_orbit_count(x));
      GSet y = disjoint_union(x, GSet::translation(e.group));
      CHECK(y.orbit_count() == oracles::burnside_orbit_count(y));
    }
  }
}

TEST_CASE("isotropy subgroups are conjugate along orbits") {
  for (const char* name : {"S3", "D4", "A4"}) {
    const FiniteGroup& g = cat(name);
    for (const auto& cls : g.subgroup_classes()) {
      GSet x = GSet::coset_space(g, cls.representative());
      for (const auto& orbit : x.orbits()) {
        Bitset base = x.isotropy(orbit[0]).members();
        for (int h = 0; h < g.order(); ++h) {
          int moved = x.apply(h, orbit[0]);
          Bitset expected(g.order());
          for (int e : base.elements()) expected.insert(g.conj(h, e));
          CHECK(x.isotropy(moved).members() == expected);
        }
      }
    }
  }
}

TEST_CASE("induction") {
  const FiniteGroup& s3 = cat("S3");

  // Ind_G^G X is X (along the identity embedding).
  GSet reg = GSet::translation(s3);
  std::vector<int> id(s3.order());
  std::iota(id.begin(), id.end(), 0);
  Homomorphism id_emb(s3, s3, id);
  CHECK(equivariant_isomorphic(induce(reg, s3, id_emb), reg));

  // Ind_G^H(G/K) = H/K for K <= G <= H.
  for (const auto& sub : s3.all_subgroups()) {
    Homomorphism emb = sub.embedding();
    const FiniteGroup& g = emb.source();
    for (const auto& kcls : g.subgroup_classes()) {
      GSet gk = GSet::coset_space(g, kcls.representative());
      GSet induced = induce(gk, s3, emb);
      // H/K built directly: K embedded into H.
      std::vector<int> k_in_h;
      for (int e : kcls.representative().elements()) k_in_h.push_back(emb(e));
      GSet hk = GSet::coset_space(s3, s3.closure(k_in_h));
      CHECK(equivariant_isomorphic(induced, hk));
    }
  }

  // Ind of a point from Z2 inside S3: 3 points, transitive.
  Subgroup z2 = order2_subgroup(s3);
  Homomorphism z2_emb = z2.embedding();
  GSet induced_pt = induce(GSet::one_point(z2_emb.source()), s3, z2_emb);
  CHECK(induced_pt.size() == 3);
  CHECK(induced_pt.orbit_count() == 1);

  // Non-injective embedding is rejected.
  const FiniteGroup& z4 = cat("Z4");
  auto [q, proj] = z4.quotient_by(z4.all_subgroups()[1]);
  (void)q;
  CHECK_THROWS_AS(induce(GSet::one_point(z4), q, Homomorphism(z4, q, proj.images())),
                  DomainError);

  // Size cap.
  CHECK_THROWS_AS(induce(GSet::translation(z2_emb.source()), s3, z2_emb, 2), CapExceededError);
}

TEST_CASE("induction composes along nested chains") {
  // K <= G <= H inside catalog groups of order <= 12.
  for (const char* name : {"D4", "A4", "D6"}) {
    const FiniteGroup& h = cat(name);
    for (const auto& gsub : h.all_subgroups()) {
      if (gsub.order() == 1 || gsub.is_whole()) continue;
      Homomorphism emb_gh = gsub.embedding();
      const FiniteGroup& g = emb_gh.source();
      for (const auto& ksub : g.all_subgroups()) {
        if (ksub.order() == gsub.order()) continue;
        Homomorphism emb_kg = ksub.embedding();
        const FiniteGroup& k = emb_kg.source();
        GSet x = GSet::translation(k);
        // Embed K directly into H by composing the embeddings.
        Homomorphism emb_kh = Homomorphism::compose(emb_gh, emb_kg);
        GSet direct = induce(x, h, emb_kh);
        GSet staged = induce(induce(x, g, emb_kg), h, emb_gh);
        CHECK(equivariant_isomorphic(direct, staged));
      }
    }
  }
}

TEST_CASE("unions and products") {
  const FiniteGroup& s3 = cat("S3");
  GSet cosets = GSet::coset_space(s3, order2_subgroup(s3));
  GSet empty = GSet::from_action(s3, {});
  CHECK(equivariant_isomorphic(disjoint_union(cosets, empty), cosets));

  GSet pt_trivial = GSet::one_point(FiniteGroup());
  GSet prod = gset_product(cosets, pt_trivial);
  CHECK(prod.size() == cosets.size());
  CHECK(prod.orbit_count() == cosets.orbit_count());

  GSet reg2 = GSet::translation(cat("Z2"));
  CHECK(gset_product(cosets, reg2).size() == cosets.size() * 2);
}

TEST_CASE("equivariant isomorphism distinguishes non-conjugate isotropy") {
  const FiniteGroup& v4 = cat("Z2xZ2");
  auto subs = v4.all_subgroups();
  std::vector<Subgroup> order2;
  for (const auto& s : subs)
    if (s.order() == 2) order2.push_back(s);
  REQUIRE(order2.size() == 3);
  GSet a = GSet::coset_space(v4, order2[0]);
  GSet b = GSet::coset_space(v4, order2[1]);
  CHECK(a.size() == b.size());
  CHECK_FALSE(equivariant_isomorphic(a, b));
  CHECK(equivariant_isomorphic(a, GSet::coset_space(v4, order2[0])));
}

TEST_CASE("action law validation") {
  const FiniteGroup& z2 = cat("Z2");
  CHECK_THROWS_AS(GSet::from_action(z2, {{0, 0}, {1, 0}}), DomainError);  // not identity at e
  CHECK_THROWS_AS(GSet::from_action(z2, {{0, 2}}), DomainError);         // out of range
}
