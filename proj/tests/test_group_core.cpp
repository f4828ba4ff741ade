#include <doctest.h>

#include <numeric>
#include <random>
#include <set>
#include <thread>

#include "orbchi/catalog.hpp"
#include "orbchi/group.hpp"
#include "oracles.hpp"

using namespace orbchi;

namespace {
const FiniteGroup& cat(const char* name) { return catalog_find(name)->group; }
}  // namespace

TEST_CASE("building from generators matches naive closure") {
  FiniteGroup triv = FiniteGroup::from_generators(1, {});
  CHECK(triv.order() == 1);

  FiniteGroup s3 = FiniteGroup::from_generators(3, {{1, 2, 0}, {1, 0, 2}});
  CHECK(s3.order() == 6);
  CHECK(oracles::naive_permutation_closure(3, {{1, 2, 0}, {1, 0, 2}}).size() == 6);
  CHECK(are_isomorphic(s3, cat("S3")));

  FiniteGroup z4 = FiniteGroup::from_generators(4, {{1, 2, 3, 0}});
  CHECK(z4.order() == 4);
  CHECK(oracles::naive_permutation_closure(4, {{1, 2, 3, 0}}).size() == 4);
  CHECK(are_isomorphic(z4, cat("Z4")));

  CHECK_THROWS_AS(FiniteGroup::from_generators(5, {{1, 2, 3, 4, 0}}, "", 3), CapExceededError);
  CHECK_THROWS_AS(FiniteGroup::from_generators(3, {{0, 0, 1}}), DomainError);
}

TEST_CASE("table validation rejects broken tables") {
  CHECK_THROWS_AS(FiniteGroup::from_table({{0, 1}, {1, 1}}), DomainError);
  // Latin square but no identity at 0.
  CHECK_THROWS_AS(FiniteGroup::from_table({{1, 0}, {0, 1}}), DomainError);
}

TEST_CASE("subgroup enumeration equals the subset filter") {
  CHECK(FiniteGroup().all_subgroups().size() == 1);

  auto s3_subs = cat("S3").all_subgroups();
  REQUIRE(s3_subs.size() == 6);
  std::multiset<int> orders;
  for (const auto& s : s3_subs) orders.insert(s.order());
  CHECK(orders == std::multiset<int>{1, 2, 2, 2, 3, 6});

  CHECK(cat("Z4").all_subgroups().size() == 3);

  for (const char* name : {"Z4", "S3", "Q8", "D4", "Z12", "A4", "D6", "Dic3"}) {
    const FiniteGroup& g = cat(name);
    auto expected = oracles::subset_filter_subgroups(g);
    auto got = g.all_subgroups();
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].elements() == expected[i]);
  }
}

TEST_CASE("normal subgroups") {
  auto s3_normals = cat("S3").normal_subgroups();
  REQUIRE(s3_normals.size() == 3);
  CHECK(s3_normals[0].order() == 1);
  CHECK(s3_normals[1].order() == 3);
  CHECK(s3_normals[2].order() == 6);

  CHECK(cat("Z4").normal_subgroups().size() == 3);  // abelian: every subgroup
  CHECK(cat("Q8").normal_subgroups().size() == 6);
  CHECK(cat("Q8").all_subgroups().size() == 6);
}

TEST_CASE("quotients") {
  const FiniteGroup& s3 = cat("S3");
  auto [qq, pq] = s3.quotient_by(s3.whole());
  CHECK(qq.order() == 1);

  Subgroup a3 = s3.normal_subgroups()[1];
  auto [q2, proj] = s3.quotient_by(a3);
  CHECK(q2.order() == 2);
  CHECK(proj.is_surjective());
  CHECK(proj.kernel().members() == a3.members());

  const FiniteGroup& z4 = cat("Z4");
  Subgroup z2_in_z4 = z4.all_subgroups()[1];
  auto [qz, pz] = z4.quotient_by(z2_in_z4);
  CHECK(are_isomorphic(qz, cat("Z2")));
  CHECK(pz.kernel().order() == 2);

  // Non-normal subgroup of S3.
  for (const auto& s : s3.all_subgroups())
    if (s.order() == 2) {
      CHECK_THROWS_AS(s3.quotient_by(s), DomainError);
      break;
    }
}

TEST_CASE("conjugacy classes and the class equation") {
  CHECK(FiniteGroup().conjugacy_classes().size() == 1);

  auto s3_classes = cat("S3").conjugacy_classes();
  REQUIRE(s3_classes.size() == 3);
  std::multiset<std::size_t> sizes;
  for (const auto& c : s3_classes) sizes.insert(c.size());
  CHECK(sizes == std::multiset<std::size_t>{1, 3, 2});
  CHECK(s3_classes[0] == std::vector<int>{0});

  CHECK(cat("Z4").conjugacy_classes().size() == 4);

  for (const auto& e : small_groups_catalog(12)) {
    int total = 0;
    for (const auto& c : e.group.conjugacy_classes()) {
      CHECK(e.group.order() % static_cast<int>(c.size()) == 0);
      total += static_cast<int>(c.size());
      CHECK(c == oracles::conjugacy_class_of(e.group, c[0]));
    }
    CHECK(total == e.group.order());
  }
}

TEST_CASE("centralizers") {
  const FiniteGroup& s3 = cat("S3");
  CHECK(s3.centralizer_of({0}).order() == 6);
  int transposition = -1, threecycle = -1;
  for (int x = 1; x < 6; ++x) {
    if (s3.element_order(x) == 2 && transposition < 0) transposition = x;
    if (s3.element_order(x) == 3 && threecycle < 0) threecycle = x;
  }
  CHECK(s3.centralizer_of({transposition}).order() == 2);
  CHECK(s3.centralizer_of({threecycle}).order() == 3);
  CHECK(s3.center().order() == 1);
}

TEST_CASE("automorphisms") {
  CHECK(cat("Z2xZ2").automorphism_images(Omega::FullAut).size() == 6);
  CHECK(oracles::all_bijections_aut_count(cat("Z2xZ2")) == 6);

  CHECK(cat("Z6").automorphism_images(Omega::Inner).size() == 1);
  CHECK(cat("Z4").automorphism_images(Omega::Inner).size() == 1);

  auto s3_full = cat("S3").automorphism_images(Omega::FullAut);
  auto s3_inner = cat("S3").automorphism_images(Omega::Inner);
  CHECK(s3_full.size() == 6);
  CHECK(oracles::all_bijections_aut_count(cat("S3")) == 6);
  CHECK(std::set<std::vector<int>>(s3_full.begin(), s3_full.end()) ==
        std::set<std::vector<int>>(s3_inner.begin(), s3_inner.end()));

  for (const auto& e : small_groups_catalog(12)) {
    CHECK(static_cast<int>(e.group.automorphism_images(Omega::Inner).size()) ==
          e.group.order() / e.group.center().order());
    for (const auto& h : e.group.automorphisms(Omega::FullAut)) CHECK(h.is_bijective());
  }
}

TEST_CASE("isomorphism testing with witnesses") {
  const FiniteGroup& z4 = cat("Z4");
  auto self = find_isomorphism(z4, z4);
  REQUIRE(self.has_value());
  CHECK(self->is_bijective());

  CHECK_FALSE(are_isomorphic(cat("Z4"), cat("Z2xZ2")));
  CHECK_FALSE(oracles::all_bijections_isomorphic(cat("Z4"), cat("Z2xZ2")));

  FiniteGroup z2z3 = direct_product(cat("Z2"), cat("Z3"));
  CHECK(are_isomorphic(cat("Z6"), z2z3));
  CHECK(oracles::all_bijections_isomorphic(cat("Z6"), z2z3));
  auto w = find_isomorphism(cat("Z6"), z2z3);
  REQUIRE(w.has_value());
  CHECK(w->is_bijective());
}

TEST_CASE("canonical keys") {
  CHECK(FiniteGroup().canonical_key().bytes() == std::string("\x01\x00\x00", 3));

  FiniteGroup z2z3 = direct_product(cat("Z2"), cat("Z3"));
  CHECK(cat("Z6").canonical_key() == z2z3.canonical_key());
  CHECK(cat("Z4").canonical_key() != cat("Z2xZ2").canonical_key());

  // Keys decode to a representative whose key is the key itself.
  for (const char* name : {"Z1", "Z6", "S3", "Q8", "A4"}) {
    const CanonicalKey& k = cat(name).canonical_key();
    FiniteGroup rep = k.representative();
    CHECK(rep.canonical_key() == k);
    CHECK(are_isomorphic(rep, cat(name)));
  }
}

TEST_CASE("direct products") {
  const FiniteGroup& s3 = cat("S3");
  CHECK(are_isomorphic(direct_product(s3, FiniteGroup()), s3));
  CHECK(are_isomorphic(direct_product(cat("Z2"), cat("Z3")), cat("Z6")));
  FiniteGroup v4 = direct_product(cat("Z2"), cat("Z2"));
  CHECK(v4.order() == 4);
  for (int x = 0; x < 4; ++x) CHECK(v4.mul(x, x) == 0);
}

TEST_CASE("krull-schmidt factorization") {
  auto named = [&](const FiniteGroup& g) {
    std::map<std::string, int> out;
    for (const auto& [k, m] : krull_schmidt_factors(g))
      out[catalog_name_for_key(k).value_or(k.hex())] = m;
    return out;
  };
  CHECK(named(cat("Z6")) == std::map<std::string, int>{{"Z2", 1}, {"Z3", 1}});
  CHECK(named(cat("Z4")) == std::map<std::string, int>{{"Z4", 1}});
  CHECK(named(cat("S3")) == std::map<std::string, int>{{"S3", 1}});
  CHECK(krull_schmidt_factors(FiniteGroup()).empty());

  // Uniqueness: factors of a product are the union of the factors.
  auto catalog = small_groups_catalog_all();
  int checked = 0;
  for (const auto& e1 : catalog)
    for (const auto& e2 : catalog) {
      if (e1.group.order() * e2.group.order() > kDefaultOrderCap) continue;
      auto combined = krull_schmidt_factors(e1.group);
      for (const auto& [k, m] : krull_schmidt_factors(e2.group)) combined[k] += m;
      CHECK(krull_schmidt_factors(direct_product(e1.group, e2.group)) == combined);
      ++checked;
    }
  CHECK(checked > 100);
}

TEST_CASE("small groups catalog") {
  CHECK(small_groups_catalog(1).size() == 1);
  CHECK(small_groups_catalog(8).size() == 14);
  // The per-order classification counts 1,1,1,2,1,2,1,5,2,2,1,5 sum to 24.
  CHECK(small_groups_catalog(12).size() == 24);
  CHECK(small_groups_catalog(16).size() == 42);
  CHECK_THROWS_AS(small_groups_catalog(17), UnsupportedError);

  std::map<int, int> per_order;
  for (const auto& e : small_groups_catalog_all()) per_order[e.group.order()]++;
  const auto& counts = catalog_counts_per_order();
  for (int n = 1; n <= 16; ++n) CHECK(per_order[n] == counts[n - 1]);

  auto catalog = small_groups_catalog_all();
  for (std::size_t i = 0; i < catalog.size(); ++i)
    for (std::size_t j = i + 1; j < catalog.size(); ++j)
      CHECK_FALSE(are_isomorphic(catalog[i].group, catalog[j].group));
}

TEST_CASE("canonical tables match the all-relabelings oracle") {
  // Indecomposable groups of tiny order: the minimal-table search against
  // brute force over every identity-fixing permutation.
  for (const char* name : {"Z1", "Z2", "Z3", "Z4", "Z5", "S3", "Z7"}) {
    const FiniteGroup& g = cat(name);
    std::vector<int> expected = oracles::min_table_all_relabelings(g);
    std::vector<int> got;
    for (const auto& row : g.canonical_key().representative().table_rows())
      got.insert(got.end(), row.begin(), row.end());
    CHECK(got == expected);
  }
  // A scrambled copy canonicalizes to the same table.
  std::mt19937_64 rng(99);
  const FiniteGroup& s3 = cat("S3");
  std::vector<int> perm{0, 3, 1, 5, 2, 4};
  FiniteGroup scrambled = oracles::relabeled_group(s3, perm);
  std::vector<int> got;
  for (const auto& row : scrambled.canonical_key().representative().table_rows())
    got.insert(got.end(), row.begin(), row.end());
  CHECK(got == oracles::min_table_all_relabelings(s3));
  (void)rng;
}

TEST_CASE("canonical keys are invariant under relabeling") {
  std::mt19937_64 rng(314159);
  for (const auto& e : small_groups_catalog(12)) {
    const int n = e.group.order();
    for (int t = 0; t < 3; ++t) {
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      // Seeded shuffle of 1..n-1; index 0 must stay the identity.
      for (int i = n - 1; i > 1; --i) std::swap(perm[i], perm[1 + rng() % i]);
      FiniteGroup copy = oracles::relabeled_group(e.group, perm);
      CHECK(copy.canonical_key() == e.group.canonical_key());
    }
  }
}

TEST_CASE("isomorphism agrees with canonical key equality on catalog pairs") {
  auto catalog = small_groups_catalog_all();
  for (std::size_t i = 0; i < catalog.size(); ++i)
    for (std::size_t j = i; j < catalog.size(); ++j) {
      bool iso = are_isomorphic(catalog[i].group, catalog[j].group);
      bool keys = catalog[i].group.canonical_key() == catalog[j].group.canonical_key();
      CHECK(iso == keys);
    }
}

TEST_CASE("structure caches are safe under concurrent first access") {
  // Fresh copies so the caches are cold, then hit them from two threads.
  FiniteGroup a = make_dihedral(6);
  FiniteGroup b = direct_product(make_cyclic(2), make_dihedral(4));
  auto reader = [&](std::vector<std::string>* out) {
    for (const FiniteGroup* g : {&a, &b}) {
      out->push_back(g->canonical_key().hex());
      out->push_back(std::to_string(g->all_subgroups().size()));
      out->push_back(std::to_string(g->automorphism_images(Omega::FullAut).size()));
      out->push_back(std::to_string(g->min_generating_set().size()));
    }
  };
  std::vector<std::string> r1, r2;
  std::thread t1(reader, &r1), t2(reader, &r2);
  t1.join();
  t2.join();
  CHECK(r1 == r2);
}

TEST_CASE("minimal generating sets generate") {
  for (const auto& e : small_groups_catalog(16)) {
    auto gens = e.group.min_generating_set();
    CHECK(e.group.closure(gens).order() == e.group.order());
    if (e.group.order() > 1) CHECK(!gens.empty());
  }
}
