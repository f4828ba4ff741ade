#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "orbchi/bitset.hpp"
#include "orbchi/errors.hpp"

namespace orbchi {

/// Default order cap for constructed groups (products, closures, inductions).
constexpr int kDefaultOrderCap = 24;
/// The built-in catalog covers all isomorphism classes up to this order.
constexpr int kCatalogMaxOrder = 16;
/// Default node budget for homomorphism searches.
constexpr long long kDefaultBudget = 10'000'000;
/// Hard ceiling on the order of any representable group (keys use one byte).
constexpr int kMaxRepresentableOrder = 255;

/// Which subgroup of Aut(B) acts on hom sets by post-composition.
enum class Omega { Trivial, Inner, FullAut };

inline const char* omega_name(Omega w) {
  switch (w) {
    case Omega::Trivial: return "trivial";
    case Omega::Inner: return "inner";
    case Omega::FullAut: return "aut";
  }
  return "?";
}

/// Counts search nodes and aborts enumerations that exceed the limit.
class SearchBudget {
public:
  explicit SearchBudget(long long limit = kDefaultBudget) : limit_(limit) {}
  void tick() {
    if (++used_ > limit_)
      throw BudgetExceededError("enumeration budget of " + std::to_string(limit_) +
                                " nodes exceeded");
  }
  long long used() const { return used_; }
  long long limit() const { return limit_; }

private:
  long long limit_;
  long long used_ = 0;
};

class FiniteGroup;
class Subgroup;
class SubgroupConjClass;
class Homomorphism;

/// Stable identifier of an isomorphism class of finite groups: the order
/// byte, a kind byte, and either the lexicographically minimal
/// multiplication table (indecomposable groups) or the sorted multiset of
/// indecomposable factor keys (decomposable ones). Equal keys iff
/// isomorphic; byte-identical across runs and platforms.
class CanonicalKey {
public:
  CanonicalKey() = default;
  explicit CanonicalKey(std::string bytes) : bytes_(std::move(bytes)) {}

  int group_order() const {
    return bytes_.empty() ? 0 : static_cast<int>(static_cast<unsigned char>(bytes_[0]));
  }
  const std::string& bytes() const { return bytes_; }
  bool valid() const { return !bytes_.empty(); }

  /// Decodes the canonical table back into a group. Representatives are
  /// memoized in a process-wide registry guarded for concurrent access.
  FiniteGroup representative() const;

  std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(bytes_.size() * 2);
    for (unsigned char c : bytes_) {
      s.push_back(digits[c >> 4]);
      s.push_back(digits[c & 15]);
    }
    return s;
  }

  friend bool operator==(const CanonicalKey& a, const CanonicalKey& b) {
    return a.bytes_ == b.bytes_;
  }
  friend bool operator!=(const CanonicalKey& a, const CanonicalKey& b) {
    return a.bytes_ != b.bytes_;
  }
  /// Orders by group order first (the order byte leads), then table bytes.
  friend bool operator<(const CanonicalKey& a, const CanonicalKey& b) {
    return a.bytes_ < b.bytes_;
  }

private:
  std::string bytes_;
};

namespace detail {

/// Immutable payload of a FiniteGroup. Cheap structure (inverses, element
/// orders, conjugacy classes) is computed at construction; the expensive
/// caches (subgroup lattice, automorphisms, canonical key) are computed once
/// on first use behind once_flags, so concurrent readers are safe.
struct GroupData {
  int n = 1;
  std::vector<int> table;  // n*n, row-major: table[a*n+b] = a*b
  std::vector<int> inv;
  std::vector<int> elem_order;
  std::vector<std::vector<int>> conj_classes;
  std::vector<int> class_of_elem;
  std::string label;

  mutable std::once_flag center_once;
  mutable Bitset center;
  mutable std::once_flag subs_once;
  mutable std::vector<Bitset> subgroups;
  mutable std::once_flag normals_once;
  mutable std::vector<Bitset> normal_subs;
  mutable std::once_flag sub_classes_once;
  mutable std::vector<std::vector<Bitset>> sub_classes;
  mutable std::once_flag gens_once;
  mutable std::vector<int> min_gens;
  mutable std::once_flag fp_once;
  mutable std::string fingerprint;
  mutable std::array<std::once_flag, 3> autos_once;
  mutable std::array<std::vector<std::vector<int>>, 3> autos;
  mutable std::once_flag key_once;
  mutable CanonicalKey key;

  GroupData() = default;
  GroupData(const GroupData&) = delete;
  GroupData& operator=(const GroupData&) = delete;
};

}  // namespace detail

/// A finite group presented by its full multiplication table on element
/// indices 0..n-1 with the identity pinned to index 0. Values are immutable
/// handles sharing the underlying payload; copies are cheap and all reads are
/// thread-safe.
class FiniteGroup {
public:
  /// The trivial group.
  FiniteGroup() : d_(trivial_data()) {}

  /// Builds from an explicit table. Validates identity, inverses,
  /// associativity, and the Latin-square property.
  static FiniteGroup from_table(const std::vector<std::vector<int>>& rows,
                                std::string label = "");

  /// Closure of permutation generators on 0..degree-1, re-indexed with the
  /// identity at 0 (remaining elements in lexicographic order of their
  /// permutation arrays).
  static FiniteGroup from_generators(int degree, const std::vector<std::vector<int>>& gens,
                                     std::string label = "", int order_cap = kDefaultOrderCap);

  /// Builds a group of order n with multiplication given by a rule.
  template <typename MulFn>
  static FiniteGroup from_rule(int n, MulFn&& mul, std::string label = "") {
    std::vector<std::vector<int>> rows(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) rows[a][b] = mul(a, b);
    return from_table(rows, std::move(label));
  }

  int order() const { return d_->n; }
  const std::string& label() const { return d_->label; }
  FiniteGroup with_label(std::string label) const;

  int mul(int a, int b) const { return d_->table[static_cast<std::size_t>(a) * d_->n + b]; }
  int inv(int a) const { return d_->inv[a]; }
  int conj(int g, int x) const { return mul(mul(g, x), inv(g)); }
  int element_order(int a) const { return d_->elem_order[a]; }
  bool commutes(int a, int b) const { return mul(a, b) == mul(b, a); }
  bool is_abelian() const;

  std::vector<std::vector<int>> table_rows() const;

  const std::vector<std::vector<int>>& conjugacy_classes() const { return d_->conj_classes; }
  int conjugacy_class_of(int a) const { return d_->class_of_elem[a]; }

  Subgroup center() const;
  Subgroup whole() const;
  Subgroup trivial_subgroup() const;
  Subgroup closure(const std::vector<int>& gens) const;
  Bitset closure_set(Bitset seed) const;

  std::vector<Subgroup> all_subgroups() const;
  std::vector<Subgroup> normal_subgroups() const;
  std::vector<SubgroupConjClass> subgroup_classes() const;
  /// Index into subgroup_classes() of the class containing the given set.
  int subgroup_class_index(const Bitset& members) const;

  Subgroup centralizer_of(const std::vector<int>& elems) const;
  Subgroup centralizer(const Subgroup& s) const;

  /// Quotient by a normal subgroup, with the projection map. Coset indices
  /// are ordered by their minimal element; the identity coset is 0.
  std::pair<FiniteGroup, Homomorphism> quotient_by(const Subgroup& n) const;

  /// Greedy minimal generating set: repeatedly add the element that enlarges
  /// the generated subgroup most (ties by index). Empty for the trivial group.
  const std::vector<int>& min_generating_set() const;

  /// Automorphisms: the identity only, conjugations (one per coset of the
  /// center), or the full automorphism group found by backtracking search.
  const std::vector<std::vector<int>>& automorphism_images(Omega kind) const;
  std::vector<Homomorphism> automorphisms(Omega kind) const;

  /// Cheap isomorphism invariants, serialized; equal fingerprints are
  /// necessary (not sufficient) for isomorphism.
  const std::string& fingerprint() const;

  const CanonicalKey& canonical_key() const;

  bool same_object(const FiniteGroup& o) const { return d_ == o.d_; }
  const void* impl_id() const { return d_.get(); }

private:
  static std::shared_ptr<detail::GroupData> trivial_data();
  explicit FiniteGroup(std::shared_ptr<detail::GroupData> d) : d_(std::move(d)) {}

  std::shared_ptr<detail::GroupData> d_;

  friend class Subgroup;
};

/// A subgroup recorded as a bitset of parent elements. Holds a handle to the
/// parent group, so it stays valid independently of the original variable.
class Subgroup {
public:
  Subgroup(FiniteGroup parent, Bitset members)
      : parent_(std::move(parent)), members_(std::move(members)) {
    validate();
  }

  const FiniteGroup& parent() const { return parent_; }
  const Bitset& members() const { return members_; }
  int order() const { return members_.count(); }
  bool contains(int a) const { return members_.contains(a); }
  std::vector<int> elements() const { return members_.elements(); }

  bool is_normal() const;
  bool is_trivial() const { return order() == 1; }
  bool is_whole() const { return order() == parent_.order(); }

  Subgroup conjugated_by(int g) const;

  /// The abstract group on this subgroup's elements (ascending order, so the
  /// identity stays at 0) together with the element map back into the parent.
  std::pair<FiniteGroup, std::vector<int>> as_group() const;

  /// as_group() packaged as an injective homomorphism into the parent.
  Homomorphism embedding() const;

  friend bool operator==(const Subgroup& a, const Subgroup& b) {
    return a.parent_.same_object(b.parent_) && a.members_ == b.members_;
  }

private:
  void validate() const;

  FiniteGroup parent_;
  Bitset members_;
};

/// A conjugacy class of subgroups; representatives[0] is the canonical
/// (numerically minimal) one and the list is closed under conjugation.
class SubgroupConjClass {
public:
  SubgroupConjClass(FiniteGroup parent, std::vector<Bitset> members)
      : parent_(std::move(parent)), members_(std::move(members)) {}

  const FiniteGroup& parent() const { return parent_; }
  std::size_t size() const { return members_.size(); }
  int subgroup_order() const { return members_[0].count(); }
  const std::vector<Bitset>& member_sets() const { return members_; }
  Subgroup representative() const { return Subgroup(parent_, members_[0]); }
  bool contains_set(const Bitset& b) const {
    return std::find(members_.begin(), members_.end(), b) != members_.end();
  }

private:
  FiniteGroup parent_;
  std::vector<Bitset> members_;
};

/// A homomorphism recorded as the full element-image vector. Validated on
/// construction.
class Homomorphism {
public:
  Homomorphism(FiniteGroup source, FiniteGroup target, std::vector<int> images)
      : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
    validate();
  }

  const FiniteGroup& source() const { return source_; }
  const FiniteGroup& target() const { return target_; }
  const std::vector<int>& images() const { return images_; }
  int operator()(int a) const { return images_[a]; }

  bool is_injective() const {
    Bitset seen(target_.order());
    for (int v : images_) {
      if (seen.contains(v)) return false;
      seen.insert(v);
    }
    return true;
  }

  bool is_surjective() const {
    Bitset seen(target_.order());
    for (int v : images_) seen.insert(v);
    return seen.count() == target_.order();
  }

  bool is_bijective() const { return source_.order() == target_.order() && is_injective(); }

  Subgroup kernel() const {
    Bitset k(source_.order());
    for (int a = 0; a < source_.order(); ++a)
      if (images_[a] == 0) k.insert(a);
    return Subgroup(source_, k);
  }

  Subgroup image() const {
    Bitset im(target_.order());
    for (int v : images_) im.insert(v);
    return Subgroup(target_, im);
  }

  /// g after f.
  static Homomorphism compose(const Homomorphism& g, const Homomorphism& f) {
    std::vector<int> im(f.source().order());
    for (int a = 0; a < f.source().order(); ++a) im[a] = g.images_[f.images_[a]];
    return Homomorphism(f.source(), g.target(), std::move(im));
  }

private:
  void validate() const {
    const int n = source_.order();
    if (static_cast<int>(images_.size()) != n)
      throw DomainError("homomorphism image vector has wrong length");
    for (int v : images_)
      if (v < 0 || v >= target_.order()) throw DomainError("homomorphism image out of range");
    if (images_[0] != 0) throw DomainError("homomorphism does not fix the identity");
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (images_[source_.mul(a, b)] != target_.mul(images_[a], images_[b]))
          throw DomainError("map is not a homomorphism");
  }

  FiniteGroup source_;
  FiniteGroup target_;
  std::vector<int> images_;
};

// ---------------------------------------------------------------------------
// FiniteGroup construction and validation
// ---------------------------------------------------------------------------

namespace detail {

inline void validate_group_table(const GroupData& d) {
  const int n = d.n;
  if (n <= 0) throw DomainError("group order must be positive");
  if (n > kMaxRepresentableOrder)
    throw CapExceededError("group order " + std::to_string(n) + " exceeds representable range");
  auto at = [&](int a, int b) { return d.table[static_cast<std::size_t>(a) * n + b]; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (at(a, b) < 0 || at(a, b) >= n) throw DomainError("table entry out of range");
  for (int a = 0; a < n; ++a)
    if (at(0, a) != a || at(a, 0) != a)
      throw DomainError("index 0 is not a two-sided identity");
  // Latin square: every row and column is a permutation.
  for (int a = 0; a < n; ++a) {
    Bitset row(n), col(n);
    for (int b = 0; b < n; ++b) {
      if (row.contains(at(a, b))) throw DomainError("row is not a permutation");
      row.insert(at(a, b));
      if (col.contains(at(b, a))) throw DomainError("column is not a permutation");
      col.insert(at(b, a));
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (at(at(a, b), c) != at(a, at(b, c)))
          throw DomainError("multiplication table is not associative");
}

inline void finish_group_data(GroupData& d) {
  const int n = d.n;
  auto at = [&](int a, int b) { return d.table[static_cast<std::size_t>(a) * n + b]; };
  d.inv.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (at(a, b) == 0) {
        d.inv[a] = b;
        break;
      }
  d.elem_order.assign(n, 0);
  for (int a = 0; a < n; ++a) {
    int x = a, k = 1;
    while (x != 0) {
      x = at(x, a);
      ++k;
    }
    d.elem_order[a] = a == 0 ? 1 : k;
  }
  // Conjugacy classes, ordered by minimal element; identity's class first.
  d.class_of_elem.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    if (d.class_of_elem[a] >= 0) continue;
    std::vector<int> cls;
    Bitset seen(n);
    std::vector<int> stack{a};
    seen.insert(a);
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      cls.push_back(x);
      for (int g = 0; g < n; ++g) {
        int y = at(at(g, x), d.inv[g]);
        if (!seen.contains(y)) {
          seen.insert(y);
          stack.push_back(y);
        }
      }
    }
    std::sort(cls.begin(), cls.end());
    int id = static_cast<int>(d.conj_classes.size());
    for (int x : cls) d.class_of_elem[x] = id;
    d.conj_classes.push_back(std::move(cls));
  }
}

}  // namespace detail

inline std::shared_ptr<detail::GroupData> FiniteGroup::trivial_data() {
  static const std::shared_ptr<detail::GroupData> d = [] {
    auto p = std::make_shared<detail::GroupData>();
    p->n = 1;
    p->table = {0};
    p->label = "Z1";
    detail::finish_group_data(*p);
    return p;
  }();
  return d;
}

inline FiniteGroup FiniteGroup::from_table(const std::vector<std::vector<int>>& rows,
                                           std::string label) {
  auto d = std::make_shared<detail::GroupData>();
  d->n = static_cast<int>(rows.size());
  d->table.reserve(static_cast<std::size_t>(d->n) * d->n);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != d->n) throw DomainError("multiplication table is not square");
    d->table.insert(d->table.end(), r.begin(), r.end());
  }
  d->label = std::move(label);
  detail::validate_group_table(*d);
  detail::finish_group_data(*d);
  return FiniteGroup(std::move(d));
}

inline FiniteGroup FiniteGroup::from_generators(int degree,
                                                const std::vector<std::vector<int>>& gens,
                                                std::string label, int order_cap) {
  if (degree <= 0) throw DomainError("degree must be positive");
  for (const auto& g : gens) {
    if (static_cast<int>(g.size()) != degree)
      throw DomainError("generator degree mismatch");
    Bitset seen(degree);
    for (int v : g) {
      if (v < 0 || v >= degree || seen.contains(v))
        throw DomainError("generator is not a permutation");
      seen.insert(v);
    }
  }
  using Perm = std::vector<int>;
  Perm identity(degree);
  for (int i = 0; i < degree; ++i) identity[i] = i;
  auto compose = [degree](const Perm& p, const Perm& q) {
    Perm r(degree);
    for (int i = 0; i < degree; ++i) r[i] = p[q[i]];
    return r;
  };
  std::set<Perm> closed{identity};
  std::vector<Perm> todo{identity};
  while (!todo.empty()) {
    Perm cur = std::move(todo.back());
    todo.pop_back();
    for (const auto& g : gens) {
      Perm next = compose(cur, g);
      if (closed.insert(next).second) {
        if (static_cast<int>(closed.size()) > order_cap)
          throw CapExceededError("permutation closure exceeds order cap " +
                                 std::to_string(order_cap));
        todo.push_back(next);
      }
    }
  }
  std::vector<Perm> elems(closed.begin(), closed.end());
  // Identity first, the rest stay in lexicographic order.
  auto it = std::find(elems.begin(), elems.end(), identity);
  std::rotate(elems.begin(), it, it + 1);
  std::map<Perm, int> index;
  for (int i = 0; i < static_cast<int>(elems.size()); ++i) index[elems[i]] = i;
  const int n = static_cast<int>(elems.size());
  std::vector<std::vector<int>> rows(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) rows[a][b] = index.at(compose(elems[a], elems[b]));
  return from_table(rows, std::move(label));
}

inline FiniteGroup FiniteGroup::with_label(std::string label) const {
  auto d = std::make_shared<detail::GroupData>();
  d->n = d_->n;
  d->table = d_->table;
  d->label = std::move(label);
  detail::finish_group_data(*d);
  return FiniteGroup(std::move(d));
}

inline bool FiniteGroup::is_abelian() const {
  for (const auto& cls : d_->conj_classes)
    if (cls.size() != 1) return false;
  return true;
}

inline std::vector<std::vector<int>> FiniteGroup::table_rows() const {
  const int n = d_->n;
  std::vector<std::vector<int>> rows(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) rows[a][b] = mul(a, b);
  return rows;
}

// ---------------------------------------------------------------------------
// Subgroup machinery
// ---------------------------------------------------------------------------

inline void Subgroup::validate() const {
  const int n = parent_.order();
  if (members_.universe() != n) throw DomainError("subgroup bitset universe mismatch");
  if (!members_.contains(0)) throw DomainError("subgroup must contain the identity");
  const std::vector<int> elems = members_.elements();
  for (int a : elems) {
    if (!members_.contains(parent_.inv(a))) throw DomainError("subgroup not closed under inverse");
    for (int b : elems)
      if (!members_.contains(parent_.mul(a, b)))
        throw DomainError("subgroup not closed under multiplication");
  }
  if (n % members_.count() != 0)
    throw DomainError("subgroup size does not divide group order");  // unreachable; sanity
}

inline Bitset FiniteGroup::closure_set(Bitset seed) const {
  seed.insert(0);
  std::vector<int> todo = seed.elements();
  while (!todo.empty()) {
    int a = todo.back();
    todo.pop_back();
    for (int b : seed.elements()) {
      int ab = mul(a, b), ba = mul(b, a);
      if (!seed.contains(ab)) {
        seed.insert(ab);
        todo.push_back(ab);
      }
      if (!seed.contains(ba)) {
        seed.insert(ba);
        todo.push_back(ba);
      }
    }
  }
  return seed;
}

inline Subgroup FiniteGroup::closure(const std::vector<int>& gens) const {
  Bitset seed(order());
  for (int g : gens) seed.insert(g);
  return Subgroup(*this, closure_set(std::move(seed)));
}

inline Subgroup FiniteGroup::trivial_subgroup() const {
  return Subgroup(*this, Bitset::singleton(order(), 0));
}

inline Subgroup FiniteGroup::whole() const { return Subgroup(*this, Bitset::full(order())); }

inline Subgroup FiniteGroup::center() const {
  std::call_once(d_->center_once, [&] {
    const int n = order();
    Bitset z(n);
    for (int a = 0; a < n; ++a) {
      bool central = true;
      for (int b = 0; b < n && central; ++b) central = commutes(a, b);
      if (central) z.insert(a);
    }
    d_->center = z;
  });
  return Subgroup(*this, d_->center);
}

inline std::vector<Subgroup> FiniteGroup::all_subgroups() const {
  std::call_once(d_->subs_once, [&] {
    const int n = order();
    std::set<Bitset> found;
    Bitset triv = Bitset::singleton(n, 0);
    found.insert(triv);
    std::vector<Bitset> frontier{triv};
    while (!frontier.empty()) {
      Bitset h = std::move(frontier.back());
      frontier.pop_back();
      for (int x = 1; x < n; ++x) {
        if (h.contains(x)) continue;
        Bitset seed = h;
        seed.insert(x);
        Bitset j = closure_set(std::move(seed));
        if (found.insert(j).second) frontier.push_back(j);
      }
    }
    std::vector<Bitset> subs(found.begin(), found.end());
    std::sort(subs.begin(), subs.end(), [](const Bitset& a, const Bitset& b) {
      if (a.count() != b.count()) return a.count() < b.count();
      return a.numeric_less(b);
    });
    d_->subgroups = std::move(subs);
  });
  std::vector<Subgroup> out;
  out.reserve(d_->subgroups.size());
  for (const auto& b : d_->subgroups) out.emplace_back(*this, b);
  return out;
}

inline Subgroup Subgroup::conjugated_by(int g) const {
  Bitset out(parent_.order());
  for (int x : members_.elements()) out.insert(parent_.conj(g, x));
  return Subgroup(parent_, std::move(out));
}

inline bool Subgroup::is_normal() const {
  const int n = parent_.order();
  for (int g = 0; g < n; ++g)
    for (int x : members_.elements())
      if (!members_.contains(parent_.conj(g, x))) return false;
  return true;
}

inline std::vector<Subgroup> FiniteGroup::normal_subgroups() const {
  std::call_once(d_->normals_once, [&] {
    std::vector<Bitset> out;
    for (const auto& s : all_subgroups())
      if (s.is_normal()) out.push_back(s.members());
    d_->normal_subs = std::move(out);
  });
  std::vector<Subgroup> out;
  out.reserve(d_->normal_subs.size());
  for (const auto& b : d_->normal_subs) out.emplace_back(*this, b);
  return out;
}

inline std::vector<SubgroupConjClass> FiniteGroup::subgroup_classes() const {
  std::call_once(d_->sub_classes_once, [&] {
    auto subs = all_subgroups();
    std::set<Bitset> remaining;
    for (const auto& s : subs) remaining.insert(s.members());
    std::vector<std::vector<Bitset>> classes;
    for (const auto& s : subs) {
      if (!remaining.count(s.members())) continue;
      std::vector<Bitset> orbit;
      std::set<Bitset> seen;
      for (int g = 0; g < order(); ++g) {
        Bitset c = s.conjugated_by(g).members();
        if (seen.insert(c).second) orbit.push_back(c);
      }
      for (const auto& c : orbit) remaining.erase(c);
      std::sort(orbit.begin(), orbit.end(),
                [](const Bitset& a, const Bitset& b) { return a.numeric_less(b); });
      classes.push_back(std::move(orbit));
    }
    std::sort(classes.begin(), classes.end(),
              [](const std::vector<Bitset>& a, const std::vector<Bitset>& b) {
                if (a[0].count() != b[0].count()) return a[0].count() < b[0].count();
                return a[0].numeric_less(b[0]);
              });
    d_->sub_classes = std::move(classes);
  });
  std::vector<SubgroupConjClass> out;
  out.reserve(d_->sub_classes.size());
  for (const auto& c : d_->sub_classes) out.emplace_back(*this, c);
  return out;
}

inline int FiniteGroup::subgroup_class_index(const Bitset& members) const {
  auto classes = subgroup_classes();
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (classes[i].contains_set(members)) return static_cast<int>(i);
  throw DomainError("set is not a subgroup of this group");
}

inline Subgroup FiniteGroup::centralizer_of(const std::vector<int>& elems) const {
  const int n = order();
  Bitset c(n);
  for (int a = 0; a < n; ++a) {
    bool ok = true;
    for (int e : elems)
      if (!commutes(a, e)) {
        ok = false;
        break;
      }
    if (ok) c.insert(a);
  }
  return Subgroup(*this, std::move(c));
}

inline Subgroup FiniteGroup::centralizer(const Subgroup& s) const {
  return centralizer_of(s.elements());
}

inline std::pair<FiniteGroup, std::vector<int>> Subgroup::as_group() const {
  std::vector<int> elems = members_.elements();  // ascending; identity first
  std::vector<int> pos(parent_.order(), -1);
  for (int i = 0; i < static_cast<int>(elems.size()); ++i) pos[elems[i]] = i;
  const int m = static_cast<int>(elems.size());
  std::vector<std::vector<int>> rows(m, std::vector<int>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) rows[i][j] = pos[parent_.mul(elems[i], elems[j])];
  std::string label = parent_.label().empty()
                          ? ""
                          : parent_.label() + "_sub" + std::to_string(m);
  return {FiniteGroup::from_table(rows, label), elems};
}

inline std::pair<FiniteGroup, Homomorphism> FiniteGroup::quotient_by(const Subgroup& nsub) const {
  if (!nsub.parent().same_object(*this)) throw DomainError("subgroup of a different group");
  if (!nsub.is_normal()) throw DomainError("cannot quotient by a non-normal subgroup");
  const int n = order();
  std::vector<int> coset_rep(n, -1);
  for (int a = 0; a < n; ++a) {
    int rep = n;
    for (int k : nsub.elements()) rep = std::min(rep, mul(a, k));
    coset_rep[a] = rep;
  }
  std::vector<int> reps;
  for (int a = 0; a < n; ++a)
    if (coset_rep[a] == a) reps.push_back(a);
  std::vector<int> index_of(n, -1);
  for (int i = 0; i < static_cast<int>(reps.size()); ++i) index_of[reps[i]] = i;
  const int m = static_cast<int>(reps.size());
  std::vector<std::vector<int>> rows(m, std::vector<int>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) rows[i][j] = index_of[coset_rep[mul(reps[i], reps[j])]];
  FiniteGroup q = FiniteGroup::from_table(
      rows, label().empty() ? "" : label() + "/N" + std::to_string(nsub.order()));
  std::vector<int> proj(n);
  for (int a = 0; a < n; ++a) proj[a] = index_of[coset_rep[a]];
  return {q, Homomorphism(*this, q, std::move(proj))};
}

inline Homomorphism Subgroup::embedding() const {
  auto [h, elems] = as_group();
  return Homomorphism(h, parent_, elems);
}

inline const std::vector<int>& FiniteGroup::min_generating_set() const {
  std::call_once(d_->gens_once, [&] {
    const int n = order();
    std::vector<int> gens;
    Bitset have = Bitset::singleton(n, 0);
    while (have.count() < n) {
      int best = -1, best_size = -1;
      for (int x = 1; x < n; ++x) {
        if (have.contains(x)) continue;
        Bitset seed = have;
        seed.insert(x);
        int sz = closure_set(std::move(seed)).count();
        if (sz > best_size) {
          best_size = sz;
          best = x;
        }
      }
      gens.push_back(best);
      Bitset seed = have;
      seed.insert(best);
      have = closure_set(std::move(seed));
    }
    d_->min_gens = std::move(gens);
  });
  return d_->min_gens;
}

// ---------------------------------------------------------------------------
// Homomorphism search engine
// ---------------------------------------------------------------------------

namespace detail {

/// Incremental build/verify data for homomorphism backtracking from a finite
/// source group through its minimal generating chain H_1 < H_2 < ... < H_k.
struct GenLadder {
  struct Step {
    int elem, src, gen;  // img[elem] = img[src] * t[gen]
  };
  struct Level {
    std::vector<Step> build;                    // new elements of H_i
    std::vector<std::pair<int, int>> verify;    // (a, j): img[a*g_j] == img[a]*t_j
    std::vector<int> members;                   // all of H_i
  };
  std::vector<Level> levels;

  static GenLadder make(const FiniteGroup& a, const std::vector<int>& gens) {
    GenLadder lad;
    const int n = a.order();
    Bitset have = Bitset::singleton(n, 0);
    std::vector<int> have_list{0};
    for (std::size_t i = 0; i < gens.size(); ++i) {
      Level lv;
      std::vector<int> queue = have_list;
      std::size_t qi = 0;
      // The generator itself enters via identity * g_i.
      if (!have.contains(gens[i])) {
        lv.build.push_back({gens[i], 0, static_cast<int>(i)});
        have.insert(gens[i]);
        queue.push_back(gens[i]);
      }
      while (qi < queue.size()) {
        int cur = queue[qi++];
        for (std::size_t j = 0; j <= i; ++j) {
          int nxt = a.mul(cur, gens[j]);
          if (!have.contains(nxt)) {
            have.insert(nxt);
            lv.build.push_back({nxt, cur, static_cast<int>(j)});
            queue.push_back(nxt);
          }
        }
      }
      have_list = have.elements();
      lv.members = have_list;
      for (int x : lv.members)
        for (std::size_t j = 0; j <= i; ++j) lv.verify.emplace_back(x, static_cast<int>(j));
      lad.levels.push_back(std::move(lv));
    }
    return lad;
  }
};

struct HomSearchOptions {
  bool injective_only = false;
  bool stop_after_first = false;
};

/// Enumerates homomorphisms A -> B as full image vectors, in lexicographic
/// order of the generator-image tuples. Backtracks over images of a minimal
/// generating set with order-divisibility and partial-relation pruning.
inline std::vector<std::vector<int>> enumerate_group_homs(const FiniteGroup& a,
                                                          const FiniteGroup& b,
                                                          SearchBudget& budget,
                                                          HomSearchOptions opt = {}) {
  const int na = a.order(), nb = b.order();
  std::vector<std::vector<int>> out;
  const auto& gens = a.min_generating_set();
  if (gens.empty()) {
    out.push_back(std::vector<int>(na, 0));
    return out;
  }
  GenLadder ladder = GenLadder::make(a, gens);
  std::vector<int> img(na, -1);
  img[0] = 0;
  std::vector<bool> used(nb, false);
  used[0] = true;  // only consulted in injective mode; identity maps to identity
  std::vector<int> tcur(gens.size(), -1);
  bool done = false;

  auto dfs = [&](auto&& self, std::size_t level) -> void {
    if (done) return;
    const auto& lv = ladder.levels[level];
    for (int t = 0; t < nb; ++t) {
      if (a.element_order(gens[level]) % b.element_order(t) != 0) continue;
      budget.tick();
      tcur[level] = t;
      std::vector<int> trail;
      bool ok = true;
      for (const auto& st : lv.build) {
        int val = b.mul(img[st.src], tcur[st.gen]);
        if (opt.injective_only && used[val]) {
          ok = false;
          break;
        }
        img[st.elem] = val;
        if (opt.injective_only) used[val] = true;
        trail.push_back(st.elem);
      }
      if (ok) {
        for (const auto& [x, j] : lv.verify) {
          if (img[a.mul(x, gens[j])] != b.mul(img[x], tcur[j])) {
            ok = false;
            break;
          }
        }
      }
      if (ok) {
        if (level + 1 == ladder.levels.size()) {
          out.push_back(img);
          if (opt.stop_after_first) done = true;
        } else {
          self(self, level + 1);
        }
      }
      for (int e : trail) {
        if (opt.injective_only) used[img[e]] = false;
        img[e] = -1;
      }
      if (done) return;
    }
    tcur[level] = -1;
  };
  dfs(dfs, 0);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Automorphisms, isomorphism, fingerprints
// ---------------------------------------------------------------------------

inline const std::vector<std::vector<int>>& FiniteGroup::automorphism_images(Omega kind) const {
  const int idx = static_cast<int>(kind);
  std::call_once(d_->autos_once[idx], [&] {
    const int n = order();
    std::vector<std::vector<int>> result;
    if (kind == Omega::Trivial) {
      std::vector<int> id(n);
      for (int i = 0; i < n; ++i) id[i] = i;
      result.push_back(std::move(id));
    } else if (kind == Omega::Inner) {
      std::set<std::vector<int>> seen;
      for (int g = 0; g < n; ++g) {
        std::vector<int> im(n);
        for (int x = 0; x < n; ++x) im[x] = conj(g, x);
        if (seen.insert(im).second) result.push_back(std::move(im));
      }
    } else {
      SearchBudget budget(5 * kDefaultBudget);
      detail::HomSearchOptions opt;
      opt.injective_only = true;
      result = detail::enumerate_group_homs(*this, *this, budget, opt);
    }
    d_->autos[idx] = std::move(result);
  });
  return d_->autos[idx];
}

inline std::vector<Homomorphism> FiniteGroup::automorphisms(Omega kind) const {
  std::vector<Homomorphism> out;
  for (const auto& im : automorphism_images(kind)) out.emplace_back(*this, *this, im);
  return out;
}

inline const std::string& FiniteGroup::fingerprint() const {
  std::call_once(d_->fp_once, [&] {
    const int n = order();
    std::ostringstream os;
    os << "n" << n << ";o";
    std::vector<int> ords(d_->elem_order);
    std::sort(ords.begin(), ords.end());
    for (int o : ords) os << o << ",";
    os << ";z" << center().order() << ";c";
    std::vector<int> cls;
    for (const auto& c : d_->conj_classes) cls.push_back(static_cast<int>(c.size()));
    std::sort(cls.begin(), cls.end());
    for (int c : cls) os << c << ",";
    // Derived subgroup and abelianization order profile.
    Bitset comm(n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) comm.insert(mul(mul(x, y), mul(inv(x), inv(y))));
    Bitset derived = closure_set(std::move(comm));
    os << ";d" << derived.count() << ";a";
    auto [q, proj] = quotient_by(Subgroup(*this, derived));
    (void)proj;
    std::vector<int> qords;
    for (int i = 0; i < q.order(); ++i) qords.push_back(q.element_order(i));
    std::sort(qords.begin(), qords.end());
    for (int o : qords) os << o << ",";
    d_->fingerprint = os.str();
  });
  return d_->fingerprint;
}

/// Searches for an isomorphism witness. Cheap invariants short-circuit most
/// non-isomorphic pairs before the backtracking search runs.
inline std::optional<Homomorphism> find_isomorphism(const FiniteGroup& a, const FiniteGroup& b) {
  if (a.order() != b.order()) return std::nullopt;
  if (a.fingerprint() != b.fingerprint()) return std::nullopt;
  SearchBudget budget(5 * kDefaultBudget);
  detail::HomSearchOptions opt;
  opt.injective_only = true;
  opt.stop_after_first = true;
  auto found = detail::enumerate_group_homs(a, b, budget, opt);
  if (found.empty()) return std::nullopt;
  return Homomorphism(a, b, found.front());
}

inline bool are_isomorphic(const FiniteGroup& a, const FiniteGroup& b) {
  return find_isomorphism(a, b).has_value();
}

// ---------------------------------------------------------------------------
// Canonical key
// ---------------------------------------------------------------------------

namespace detail {

/// Lexicographically minimal multiplication table over relabelings fixing the
/// identity. DFS assigns preimages for labels 1..n-1 in order and compares
/// the known part of the relabeled table against the best candidate found so
/// far. The comparison is incremental: positions verified equal stay equal
/// along a search path (they are fully determined by assigned labels, and the
/// best table is only ever replaced by one agreeing on them), so each node
/// resumes scanning from its parent's frontier. Any still-unlabeled product
/// must receive a label >= the number of labels assigned, which prunes
/// branches whose best-table entry is already smaller.
inline std::vector<std::uint8_t> canonical_table(const FiniteGroup& g) {
  const int n = g.order();
  if (n == 1) return {0};
  const std::size_t total = static_cast<std::size_t>(n) * n;
  std::vector<std::uint8_t> best(total, 0xFF);
  std::vector<int> new_to_old(n, -1), old_to_new(n, -1);
  new_to_old[0] = 0;
  old_to_new[0] = 0;

  struct Scan {
    int code;              // -1 better, 0 equal/undecided, +1 worse
    std::size_t frontier;  // first position not yet proven equal to best
  };

  auto resume = [&](int m, std::size_t from) -> Scan {
    for (std::size_t p = from; p < total; ++p) {
      const int i = static_cast<int>(p) / n;
      const int j = static_cast<int>(p) % n;
      int val;
      if (i == 0)
        val = j;
      else if (j == 0)
        val = i;
      else if (i < m && j < m) {
        val = old_to_new[g.mul(new_to_old[i], new_to_old[j])];
        if (val < 0) {
          // Unlabeled product: its eventual label is >= m.
          if (best[p] < m) return {1, p};
          return {0, p};
        }
      } else {
        return {0, p};
      }
      if (val != best[p]) return {val < best[p] ? -1 : 1, p};
    }
    return {0, total};
  };

  auto dfs = [&](auto&& self, int m, std::size_t frontier) -> void {
    if (m == n) {
      Scan s = resume(n, frontier);
      if (s.code < 0) {
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            best[static_cast<std::size_t>(i) * n + j] = static_cast<std::uint8_t>(
                old_to_new[g.mul(new_to_old[i], new_to_old[j])]);
      }
      return;
    }
    for (int cand = 1; cand < n; ++cand) {
      if (old_to_new[cand] >= 0) continue;
      new_to_old[m] = cand;
      old_to_new[cand] = m;
      Scan s = resume(m + 1, frontier);
      if (s.code <= 0) self(self, m + 1, s.frontier);
      old_to_new[cand] = -1;
      new_to_old[m] = -1;
    }
  };
  dfs(dfs, 1, 0);
  return best;
}

inline std::map<std::string, FiniteGroup>& key_representative_registry() {
  static std::map<std::string, FiniteGroup> reg;
  return reg;
}

inline std::mutex& key_registry_mutex() {
  static std::mutex mu;
  return mu;
}

constexpr char kKeyIndecomposable = 0x00;
constexpr char kKeyComposite = 0x01;

/// A complementary pair of proper normal subgroups (trivial intersection,
/// orders multiplying to |G|), which exhibits G as an internal direct
/// product. Deterministic: the first pair in the sorted enumeration.
inline std::optional<std::pair<Subgroup, Subgroup>> find_direct_split(const FiniteGroup& g) {
  const int n = g.order();
  if (n == 1) return std::nullopt;
  auto normals = g.normal_subgroups();
  for (std::size_t i = 0; i < normals.size(); ++i) {
    const int si = normals[i].order();
    if (si == 1 || si == n) continue;
    for (std::size_t j = i; j < normals.size(); ++j) {
      const int sj = normals[j].order();
      if (sj == 1 || sj == n || si * sj != n) continue;
      if ((normals[i].members() & normals[j].members()).count() != 1) continue;
      return std::make_pair(normals[i], normals[j]);
    }
  }
  return std::nullopt;
}

/// The indecomposable factor keys packed inside a canonical key, in sorted
/// order. An indecomposable nontrivial key lists itself; the trivial key
/// lists nothing.
inline std::vector<std::string> key_factor_bytes(const std::string& bytes) {
  if (bytes.size() < 2) throw DomainError("malformed canonical key");
  if (bytes[1] == kKeyIndecomposable)
    return static_cast<unsigned char>(bytes[0]) == 1 ? std::vector<std::string>{}
                                                     : std::vector<std::string>{bytes};
  std::vector<std::string> out;
  std::size_t pos = 3;
  const int count = static_cast<unsigned char>(bytes[2]);
  for (int f = 0; f < count; ++f) {
    if (pos + 2 > bytes.size()) throw DomainError("malformed canonical key");
    const int ord = static_cast<unsigned char>(bytes[pos]);
    const std::size_t len = 2 + static_cast<std::size_t>(ord) * ord;
    if (bytes[pos + 1] != kKeyIndecomposable || pos + len > bytes.size())
      throw DomainError("malformed canonical key");
    out.push_back(bytes.substr(pos, len));
    pos += len;
  }
  if (pos != bytes.size()) throw DomainError("malformed canonical key");
  return out;
}

}  // namespace detail

inline FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

/// Key layout: [order][kind][payload]. Indecomposable groups carry their
/// lexicographically minimal multiplication table; decomposable groups carry
/// the sorted multiset of their indecomposable factors' keys (unique by the
/// Krull-Schmidt theorem). Splitting first keeps the minimal-table search on
/// small indecomposable pieces, where it is fast.
inline const CanonicalKey& FiniteGroup::canonical_key() const {
  std::call_once(d_->key_once, [&] {
    std::string bytes;
    auto split = detail::find_direct_split(*this);
    if (!split) {
      auto tbl = detail::canonical_table(*this);
      bytes.reserve(tbl.size() + 2);
      bytes.push_back(static_cast<char>(static_cast<unsigned char>(order())));
      bytes.push_back(detail::kKeyIndecomposable);
      for (std::uint8_t v : tbl) bytes.push_back(static_cast<char>(v));
    } else {
      std::vector<std::string> factors;
      for (const Subgroup* part : {&split->first, &split->second}) {
        FiniteGroup part_group = part->as_group().first;
        const CanonicalKey sub = part_group.canonical_key();
        for (auto& f : detail::key_factor_bytes(sub.bytes())) factors.push_back(std::move(f));
      }
      std::sort(factors.begin(), factors.end());
      bytes.push_back(static_cast<char>(static_cast<unsigned char>(order())));
      bytes.push_back(detail::kKeyComposite);
      bytes.push_back(static_cast<char>(static_cast<unsigned char>(factors.size())));
      for (const auto& f : factors) bytes += f;
    }
    d_->key = CanonicalKey(std::move(bytes));
  });
  return d_->key;
}

inline FiniteGroup CanonicalKey::representative() const {
  if (!valid()) throw DomainError("empty canonical key");
  {
    std::lock_guard<std::mutex> lock(detail::key_registry_mutex());
    auto& reg = detail::key_representative_registry();
    auto it = reg.find(bytes_);
    if (it != reg.end()) return it->second;
  }
  const int n = group_order();
  FiniteGroup rep;
  if (bytes_.size() >= 2 && bytes_[1] == detail::kKeyComposite) {
    for (const auto& f : detail::key_factor_bytes(bytes_))
      rep = direct_product(rep, CanonicalKey(f).representative());
    if (rep.order() != n) throw DomainError("malformed canonical key");
  } else {
    if (static_cast<int>(bytes_.size()) != 2 + n * n) throw DomainError("malformed canonical key");
    std::vector<std::vector<int>> rows(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        rows[i][j] = static_cast<unsigned char>(bytes_[2 + static_cast<std::size_t>(i) * n + j]);
    rep = FiniteGroup::from_table(rows);
  }
  std::lock_guard<std::mutex> lock(detail::key_registry_mutex());
  auto& reg = detail::key_representative_registry();
  auto [it, inserted] = reg.emplace(bytes_, rep);
  return it->second;
}

// ---------------------------------------------------------------------------
// Direct products and Krull-Schmidt factorization
// ---------------------------------------------------------------------------

inline FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const int na = a.order(), nb = b.order();
  if (na * nb > kMaxRepresentableOrder)
    throw CapExceededError("direct product order " + std::to_string(na * nb) +
                           " exceeds representable range");
  const int n = na * nb;
  std::vector<std::vector<int>> rows(n, std::vector<int>(n));
  for (int x1 = 0; x1 < na; ++x1)
    for (int y1 = 0; y1 < nb; ++y1)
      for (int x2 = 0; x2 < na; ++x2)
        for (int y2 = 0; y2 < nb; ++y2)
          rows[x1 * nb + y1][x2 * nb + y2] = a.mul(x1, x2) * nb + b.mul(y1, y2);
  std::string label;
  if (!a.label().empty() && !b.label().empty()) label = a.label() + "x" + b.label();
  return FiniteGroup::from_table(rows, label);
}

/// Multiset of canonical keys of the indecomposable direct factors. The
/// trivial group factors as the empty multiset.
inline std::map<CanonicalKey, int> krull_schmidt_factors(const FiniteGroup& g) {
  std::map<CanonicalKey, int> result;
  for (auto& f : detail::key_factor_bytes(g.canonical_key().bytes()))
    result[CanonicalKey(std::move(f))] += 1;
  return result;
}

}  // namespace orbchi
