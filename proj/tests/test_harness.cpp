#include <doctest.h>

#include <random>

#include "orbchi/harness.hpp"
#include "orbchi/io.hpp"

using namespace orbchi;

namespace {
const FiniteGroup& cat(const char* name) { return catalog_find(name)->group; }
}  // namespace

TEST_CASE("moment and faithful matrices on tiny universes") {
  CountMatrices m1 = build_matrices(1, Omega::Inner);
  REQUIRE(m1.universe.size() == 1);
  CHECK(m1.rep == std::vector<std::vector<long long>>{{1}});
  CHECK(m1.frep == std::vector<std::vector<long long>>{{1}});

  CountMatrices m2 = build_matrices(2, Omega::Inner);
  REQUIRE(m2.universe.size() == 2);
  CHECK(m2.universe[0].name == "Z1");
  CHECK(m2.universe[1].name == "Z2");
  CHECK(m2.rep == std::vector<std::vector<long long>>{{1, 1}, {1, 2}});
  // The faithful matrix by direct enumeration: the one map from the trivial
  // group is injective into anything, so the first row is all ones.
  CHECK(m2.frep == std::vector<std::vector<long long>>{{1, 1}, {0, 1}});
}

TEST_CASE("faithful matrix is triangular with positive diagonal") {
  for (int max_order : {6, 8}) {
    CountMatrices m = build_matrices_cached(max_order, Omega::Inner);
    TriangularityReport t = check_triangularity(m);
    CHECK(t.strictly_upper_triangular);
    CHECK(t.positive_diagonal);
    // Same-order non-isomorphic pairs vanish in both directions; checked, not
    // assumed.
    for (std::size_t i = 0; i < m.universe.size(); ++i)
      for (std::size_t j = 0; j < m.universe.size(); ++j) {
        if (i == j) continue;
        if (m.universe[i].group.order() == m.universe[j].group.order()) {
          CHECK(m.frep[i][j] == 0);
          CHECK(m.frep[j][i] == 0);
        }
      }
  }
}

TEST_CASE("reduction lemma on random vectors") {
  ReductionReport r = verify_reduction_lemma(8, Omega::Inner, 100, 12345);
  CHECK(r.pass());
  CHECK(r.checked == 101);  // zero vector + trials

  ReductionReport r2 = verify_reduction_lemma(6, Omega::FullAut, 50, 999);
  CHECK(r2.pass());
}

TEST_CASE("vanishing theorem ranks") {
  RankReport r1 = verify_vanishing_theorem(1, Omega::Inner);
  CHECK(r1.rank == 1);
  CHECK(r1.pass());

  RankReport r4 = verify_vanishing_theorem(4, Omega::Inner);
  CHECK(r4.universe_size == 5);
  CHECK(r4.rank == 5);
  CHECK(r4.pass());

  RankReport r8 = verify_vanishing_theorem(8, Omega::Inner);
  CHECK(r8.universe_size == 14);
  CHECK(r8.rank == 14);
  CHECK(r8.pass());
}

TEST_CASE("reconstruction") {
  // All values 1 forces the unit: the first column is all ones.
  std::map<std::string, Rational> ones;
  for (const auto& e : build_universe(8)) ones[e.name] = Rational(1);
  CHECK(reconstruct(ones, 8) == RingElement::one());

  // Round-trip a hand-picked virtual element.
  RingElement r = 2 * RingElement::generator(cat("Z2")) - RingElement::generator(cat("S3"));
  const CountMatrices& m = build_matrices_cached(8, Omega::Inner);
  std::map<std::string, Rational> values;
  for (std::size_t i = 0; i < m.universe.size(); ++i) {
    long long v = 0;
    for (std::size_t j = 0; j < m.universe.size(); ++j)
      v += m.rep[i][j] * r.coefficient(m.universe[j].key);
    values[m.universe[i].name] = Rational(v);
  }
  CHECK(reconstruct(values, 8) == r);

  // Seeded random round-trips.
  std::mt19937_64 rng(2024);
  auto universe = build_universe(8);
  for (int t = 0; t < 10; ++t) {
    RingElement x = random_ring_element(universe, rng);
    std::map<std::string, Rational> vals;
    for (std::size_t i = 0; i < m.universe.size(); ++i) {
      long long v = 0;
      for (std::size_t j = 0; j < m.universe.size(); ++j)
        v += m.rep[i][j] * x.coefficient(m.universe[j].key);
      vals[m.universe[i].name] = Rational(v);
    }
    CHECK(reconstruct(vals, 8) == x);
  }

  // Missing rows and non-integral data are rejected.
  std::map<std::string, Rational> missing = ones;
  missing.erase("S3");
  CHECK_THROWS_AS(reconstruct(missing, 8), DomainError);

  std::map<std::string, Rational> fractional;
  for (const auto& e : build_universe(8)) fractional[e.name] = Rational(1, 2);
  CHECK_THROWS_AS(reconstruct(fractional, 8), IntegralityError);
}

TEST_CASE("zero values reconstruct to the zero element") {
  std::map<std::string, Rational> zeros;
  for (const auto& e : build_universe(8)) zeros[e.name] = Rational(0);
  RingElement z = reconstruct(zeros, 8);
  CHECK(z.is_zero());
}

TEST_CASE("universal characteristic from chi values") {
  const FiniteGroup& s3 = cat("S3");
  CHECK(universal_from_chi(GSet::one_point(s3), 8) == RingElement::generator(s3));
  CHECK(universal_from_chi(GSet::translation(cat("Z2")), 8) == RingElement::one());

  Subgroup k = [&] {
    for (const auto& s : s3.all_subgroups())
      if (s.order() == 2) return s;
    throw std::runtime_error("unreachable");
  }();
  GSet cosets = GSet::coset_space(s3, k);
  CHECK(universal_from_chi(cosets, 8) == RingElement::generator(cat("Z2")));
  CHECK(universal_from_chi(cosets, 8) == universal_euler(cosets));
}

TEST_CASE("property drivers pass at small scale") {
  PropertyReport ind = verify_induction_property(6, default_induction_specs(), true);
  CHECK(ind.pass());
  CHECK(ind.checked > 50);

  PropertyReport dec = verify_decomposition_property(4, Omega::Inner);
  CHECK(dec.pass());

  std::vector<FgGroupSpec> specs = {FgGroupSpec::free_abelian(1)};
  PropertyReport mult = verify_multiplicativity_property(8, specs);
  CHECK(mult.pass());
}
