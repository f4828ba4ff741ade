#include <doctest.h>

#include "orbchi/io.hpp"

using namespace orbchi;

namespace {
const FiniteGroup& cat(const char* name) { return catalog_find(name)->group; }
}  // namespace

TEST_CASE("a-spec grammar") {
  CHECK(parse_fg_spec("Z").kind() == FgGroupSpec::Kind::FreeAbelian);
  CHECK(parse_fg_spec("Z").free_rank() == 1);
  CHECK(parse_fg_spec("Z^3").free_rank() == 3);
  CHECK(parse_fg_spec("ZxZ").free_rank() == 2);
  CHECK(parse_fg_spec("Zx Z").free_rank() == 2);  // whitespace tolerated

  CHECK(parse_fg_spec("Z2").kind() == FgGroupSpec::Kind::Finite);
  CHECK(parse_fg_spec("Z2").finite_part().order() == 2);
  CHECK(parse_fg_spec("S3").finite_part().order() == 6);
  CHECK(parse_fg_spec("D3").finite_part().order() == 6);  // alias
  CHECK(parse_fg_spec("Z24").finite_part().order() == 24);  // dynamic cyclic

  FgGroupSpec prod = parse_fg_spec("Z2xZ3");
  CHECK(prod.kind() == FgGroupSpec::Kind::Finite);
  CHECK(prod.finite_part().order() == 6);

  FgGroupSpec pwf = parse_fg_spec("S3xZ");
  CHECK(pwf.kind() == FgGroupSpec::Kind::ProductWithFree);
  CHECK(pwf.finite_part().order() == 6);
  CHECK(pwf.free_rank() == 1);

  FgGroupSpec mixed = parse_fg_spec("Z2xZxZ3xZ");
  CHECK(mixed.kind() == FgGroupSpec::Kind::ProductWithFree);
  CHECK(mixed.finite_part().order() == 6);
  CHECK(mixed.free_rank() == 2);

  // Catalog names containing 'x' resolve before product splitting.
  CHECK(parse_fg_spec("Z4xZ2:Z2").finite_part().order() == 16);
  CHECK(parse_fg_spec("Z4xZ2:Z2").finite_part().same_object(cat("Z4xZ2:Z2")));
  CHECK(parse_fg_spec("Z4xZ2:Z2xZ2").finite_part().order() == 32);

  CHECK_THROWS_AS(parse_fg_spec("Spooky"), ParseError);
  CHECK_THROWS_AS(parse_fg_spec(""), ParseError);
}

TEST_CASE("presentation grammar") {
  PresentationSpec p = parse_presentation("pres:{gens: x0 x1; rels: x0^2, (x0 x1)^3}");
  CHECK(p.gen_count == 2);
  REQUIRE(p.relators.size() == 2);
  CHECK(p.relators[0] == std::vector<int>{1, 1});
  CHECK(p.relators[1] == std::vector<int>{1, 2, 1, 2, 1, 2});

  PresentationSpec inv = parse_presentation("pres:{gens: a b; rels: a b a^-1 b^-1}");
  CHECK(inv.relators[0] == std::vector<int>{1, 2, -1, -2});

  PresentationSpec nested = parse_presentation("pres:{gens: a; rels: (a^2)^-3}");
  CHECK(nested.relators[0] == std::vector<int>(6, -1));

  CHECK_THROWS_AS(parse_presentation("pres:{gens: a; rels: b^2}"), ParseError);
  CHECK_THROWS_AS(parse_presentation("pres:{gens: a; rels: (a^2}"), ParseError);
  CHECK_THROWS_AS(parse_presentation("pres:{rels: a^2}"), ParseError);
}

TEST_CASE("group json round-trip") {
  json j = group_to_json(cat("Q8"));
  FiniteGroup q8 = group_from_json(j);
  CHECK(q8.order() == 8);
  CHECK(are_isomorphic(q8, cat("Q8")));

  json gen_spec;
  gen_spec["name"] = "S3";
  gen_spec["degree"] = 3;
  gen_spec["generators"] = std::vector<std::vector<int>>{{1, 2, 0}, {1, 0, 2}};
  CHECK(group_from_json(gen_spec).order() == 6);

  CHECK_THROWS_AS(group_from_json(json::object()), ParseError);
  CHECK_THROWS_AS(resolve_group("NoSuchGroup"), ParseError);
}

TEST_CASE("gset json round-trip") {
  const FiniteGroup& s3 = cat("S3");
  GSet x = GSet::coset_space(s3, s3.all_subgroups()[1]);
  json j = gset_to_json(x);
  CHECK(j.at("group").is_string());  // catalog group emitted by name
  GSet back = gset_from_json(j);
  CHECK(back.size() == x.size());
  CHECK(back.action_table() == x.action_table());

  json bad = j;
  bad["size"] = 99;
  CHECK_THROWS_AS(gset_from_json(bad), ParseError);

  // Non-catalog acting groups are inlined.
  FiniteGroup z2z3 = direct_product(cat("Z2"), cat("Z3"));
  json j2 = gset_to_json(GSet::translation(z2z3));
  CHECK(j2.at("group").is_object());
  CHECK(gset_from_json(j2).size() == 6);
}

TEST_CASE("ring element json round-trip") {
  RingElement r = 2 * RingElement::generator(cat("Z2")) - RingElement::generator(cat("S3"));
  json j = ring_to_json(r);
  REQUIRE(j.size() == 2);
  CHECK(j[0].at("group") == "Z2");
  CHECK(j[0].at("coeff") == 2);
  CHECK(j[1].at("group") == "S3");
  CHECK(ring_from_json(j) == r);

  // Deterministic serialization: byte-identical dumps.
  CHECK(ring_to_json(r).dump() == ring_to_json(r).dump());

  // Keys outside the catalog range are inlined with their tables.
  FiniteGroup big = direct_product(cat("Z3"), cat("S3"));  // order 18
  RingElement rb = RingElement::generator(big);
  json jb = ring_to_json(rb);
  CHECK(jb[0].at("group").is_object());
  CHECK(ring_from_json(jb) == rb);
}

TEST_CASE("values json round-trip") {
  std::map<std::string, Rational> values{{"Z1", Rational(1)}, {"Z2", Rational(3)},
                                         {"S3", Rational(-2)}};
  json j = values_to_json(values, 8);
  CHECK(j.at("max_order") == 8);
  auto back = values_from_json(j);
  CHECK(back == values);

  json frac;
  frac["values"]["Z1"] = "1/2";
  CHECK(values_from_json(frac).at("Z1") == Rational(1, 2));
}

TEST_CASE("rationals parse and print") {
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("-7/2") == Rational(-7, 2));
  CHECK(Rational(6, -4).str() == "-3/2");
  CHECK(Rational(0, 5).str() == "0");
  CHECK_THROWS_AS(parse_rational("x"), ParseError);
  CHECK_THROWS_AS(Rational(1, 0), DomainError);
}
