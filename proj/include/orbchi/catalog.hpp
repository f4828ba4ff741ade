#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "orbchi/group.hpp"

namespace orbchi {

// ---------------------------------------------------------------------------
// Named constructors
// ---------------------------------------------------------------------------

inline FiniteGroup make_cyclic(int n, std::string label = "") {
  if (n <= 0) throw DomainError("cyclic group order must be positive");
  if (label.empty()) label = "Z" + std::to_string(n);
  return FiniteGroup::from_rule(n, [n](int a, int b) { return (a + b) % n; }, label);
}

/// Group of order m*k on pairs (i, j), i mod m, j mod k, with
/// (i1,j1)*(i2,j2) = (i1 + r^j1 * i2 + [j1+j2 >= k]*s, j1+j2). Covers the
/// dihedral, dicyclic, semidihedral and modular families; parameters are
/// validated implicitly by the table checks.
inline FiniteGroup make_metacyclic(int m, int k, int r, int s, std::string label) {
  r = ((r % m) + m) % m;
  s = ((s % m) + m) % m;
  std::vector<int> rpow(k + 1);
  rpow[0] = 1 % m;
  for (int j = 1; j <= k; ++j) rpow[j] = (rpow[j - 1] * r) % m;
  return FiniteGroup::from_rule(
      m * k,
      [m, k, s, rpow](int x, int y) {
        int i1 = x % m, j1 = x / m, i2 = y % m, j2 = y / m;
        int jsum = j1 + j2;
        int i = (i1 + rpow[j1] * i2 + (jsum >= k ? s : 0)) % m;
        return (jsum % k) * m + i;
      },
      std::move(label));
}

/// Dihedral group on n points, order 2n.
inline FiniteGroup make_dihedral(int n, std::string label = "") {
  if (label.empty()) label = "D" + std::to_string(n);
  return make_metacyclic(n, 2, n - 1, 0, std::move(label));
}

/// Dicyclic group of order 4n (n = 2 gives the quaternion group).
inline FiniteGroup make_dicyclic(int n, std::string label = "") {
  if (label.empty()) label = "Q" + std::to_string(4 * n);
  return make_metacyclic(2 * n, 2, 2 * n - 1, n, std::move(label));
}

inline FiniteGroup make_alternating4() {
  return FiniteGroup::from_generators(4, {{1, 2, 0, 3}, {1, 0, 3, 2}}, "A4");
}

/// (Z4 x Z2) : Z2 where the acting involution sends a -> a*b, b -> b.
/// Components (i, j, c) with i mod 4, j, c mod 2.
inline FiniteGroup make_z4z2_semi_z2() {
  return FiniteGroup::from_rule(
      16,
      [](int x, int y) {
        int i1 = x >> 2, j1 = (x >> 1) & 1, c1 = x & 1;
        int i2 = y >> 2, j2 = (y >> 1) & 1, c2 = y & 1;
        int i = (i1 + i2) % 4;
        int j = (j1 + j2 + c1 * i2) % 2;
        int c = (c1 + c2) % 2;
        return (i << 2) | (j << 1) | c;
      },
      "Z4xZ2:Z2");
}

/// Central product D4 o Z4 (the order-16 Pauli group): elements i^k X^a Z^b
/// with Z X = - X Z. Components (k, a, b) with k mod 4, a, b mod 2.
inline FiniteGroup make_d4_central_z4() {
  return FiniteGroup::from_rule(
      16,
      [](int x, int y) {
        int k1 = x >> 2, a1 = (x >> 1) & 1, b1 = x & 1;
        int k2 = y >> 2, a2 = (y >> 1) & 1, b2 = y & 1;
        int k = (k1 + k2 + 2 * (b1 & a2)) % 4;
        int a = a1 ^ a2;
        int b = b1 ^ b2;
        return (k << 2) | (a << 1) | b;
      },
      "D4oZ4");
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

struct CatalogEntry {
  std::string name;
  FiniteGroup group;
};

/// One representative per isomorphism class of each order up to 16, built
/// from explicit generator/normal-form data. Per-order class counts are the
/// classical classification numbers; the test suite machine-checks order
/// correctness and pairwise non-isomorphism.
inline const std::vector<CatalogEntry>& small_groups_catalog_all() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> v;
    auto add = [&v](const FiniteGroup& g) { v.push_back({g.label(), g}); };
    auto dp = [](const FiniteGroup& a, const FiniteGroup& b) { return direct_product(a, b); };
    const FiniteGroup z2 = make_cyclic(2), z3 = make_cyclic(3), z4 = make_cyclic(4);
    add(make_cyclic(1));
    add(z2);
    add(z3);
    add(z4);
    add(dp(z2, z2));
    add(make_cyclic(5));
    add(make_cyclic(6));
    add(make_dihedral(3, "S3"));
    add(make_cyclic(7));
    add(make_cyclic(8));
    add(dp(z4, z2));
    add(dp(dp(z2, z2), z2));
    add(make_dihedral(4));
    add(make_dicyclic(2, "Q8"));
    add(make_cyclic(9));
    add(dp(z3, z3));
    add(make_cyclic(10));
    add(make_dihedral(5));
    add(make_cyclic(11));
    add(make_cyclic(12));
    add(dp(make_cyclic(6), z2));
    add(make_dihedral(6));
    add(make_alternating4());
    add(make_dicyclic(3, "Dic3"));
    add(make_cyclic(13));
    add(make_cyclic(14));
    add(make_dihedral(7));
    add(make_cyclic(15));
    add(make_cyclic(16));
    add(dp(make_cyclic(8), z2));
    add(dp(z4, z4));
    add(dp(dp(z4, z2), z2));
    add(dp(dp(dp(z2, z2), z2), z2));
    add(make_dihedral(8));
    add(make_dicyclic(4, "Q16"));
    add(make_metacyclic(8, 2, 3, 0, "SD16"));
    add(make_metacyclic(8, 2, 5, 0, "M16"));
    add(dp(make_dihedral(4), z2));
    add(dp(make_dicyclic(2, "Q8"), z2));
    add(make_metacyclic(4, 4, 3, 0, "Z4:Z4"));
    add(make_z4z2_semi_z2());
    add(make_d4_central_z4());
    return v;
  }();
  return entries;
}

/// Classification counts per order 1..16.
inline const std::vector<int>& catalog_counts_per_order() {
  static const std::vector<int> counts = {1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14};
  return counts;
}

inline std::vector<CatalogEntry> small_groups_catalog(int max_order) {
  if (max_order < 1) throw DomainError("max order must be positive");
  if (max_order > kCatalogMaxOrder)
    throw UnsupportedError("catalog covers orders up to " + std::to_string(kCatalogMaxOrder));
  std::vector<CatalogEntry> out;
  for (const auto& e : small_groups_catalog_all())
    if (e.group.order() <= max_order) out.push_back(e);
  return out;
}

inline const CatalogEntry* catalog_find(const std::string& name) {
  static const std::map<std::string, std::string> aliases = {
      {"D3", "S3"}, {"V4", "Z2xZ2"}, {"triv", "Z1"}, {"1", "Z1"}};
  std::string wanted = name;
  auto al = aliases.find(name);
  if (al != aliases.end()) wanted = al->second;
  for (const auto& e : small_groups_catalog_all())
    if (e.name == wanted) return &e;
  return nullptr;
}

/// Name of the isomorphism class for keys of catalog range (order <= 16).
inline std::optional<std::string> catalog_name_for_key(const CanonicalKey& key) {
  static std::mutex mu;
  static std::map<std::string, std::string> memo;  // key bytes -> name
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(key.bytes());
    if (it != memo.end()) return it->second;
  }
  if (key.group_order() > kCatalogMaxOrder) return std::nullopt;
  for (const auto& e : small_groups_catalog_all()) {
    if (e.group.order() != key.group_order()) continue;
    if (e.group.canonical_key() == key) {
      std::lock_guard<std::mutex> lock(mu);
      memo[key.bytes()] = e.name;
      return e.name;
    }
  }
  return std::nullopt;
}

}  // namespace orbchi
