#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "orbchi/group.hpp"

namespace orbchi {

/// Default cap on the size of induced G-sets.
constexpr int kDefaultGSetSizeCap = 96;

/// A finite left G-set: points 0..size-1 with action table act[point][g].
/// The action laws are checked exhaustively on construction. Immutable.
class GSet {
public:
  static GSet from_action(FiniteGroup group, std::vector<std::vector<int>> action,
                          std::string label = "") {
    return GSet(std::move(group), std::move(action), std::move(label));
  }

  /// The one-point set G/G.
  static GSet one_point(const FiniteGroup& g) {
    return GSet(g, {std::vector<int>(g.order(), 0)}, "point");
  }

  /// G acting on n points trivially.
  static GSet trivial_action(const FiniteGroup& g, int n) {
    std::vector<std::vector<int>> act(n, std::vector<int>(g.order()));
    for (int p = 0; p < n; ++p) std::fill(act[p].begin(), act[p].end(), p);
    return GSet(g, std::move(act), "trivial" + std::to_string(n));
  }

  /// G acting on itself by left translation.
  static GSet translation(const FiniteGroup& g) {
    const int n = g.order();
    std::vector<std::vector<int>> act(n, std::vector<int>(n));
    for (int x = 0; x < n; ++x)
      for (int h = 0; h < n; ++h) act[x][h] = g.mul(h, x);
    return GSet(g, std::move(act), "reg");
  }

  /// Left cosets G/K with g.(hK) = (gh)K. Points are ordered by the minimal
  /// element of the coset; the coset of the identity is point 0.
  static GSet coset_space(const FiniteGroup& g, const Subgroup& k) {
    if (!k.parent().same_object(g)) throw DomainError("subgroup of a different group");
    const int n = g.order();
    std::vector<int> rep(n, -1);
    for (int a = 0; a < n; ++a) {
      int r = n;
      for (int x : k.elements()) r = std::min(r, g.mul(a, x));
      rep[a] = r;
    }
    std::vector<int> reps;
    for (int a = 0; a < n; ++a)
      if (rep[a] == a) reps.push_back(a);
    std::vector<int> index_of(n, -1);
    for (int i = 0; i < static_cast<int>(reps.size()); ++i) index_of[reps[i]] = i;
    std::vector<std::vector<int>> act(reps.size(), std::vector<int>(n));
    for (int p = 0; p < static_cast<int>(reps.size()); ++p)
      for (int h = 0; h < n; ++h) act[p][h] = index_of[rep[g.mul(h, reps[p])]];
    return GSet(g, std::move(act), "cosets" + std::to_string(reps.size()));
  }

  /// k disjoint copies of the translation action (a free G-set of size k|G|).
  static GSet free_copies(const FiniteGroup& g, int k);

  int size() const { return size_; }
  const FiniteGroup& group() const { return group_; }
  const std::string& label() const { return label_; }

  /// g . p
  int apply(int g, int p) const { return act_[p][g]; }

  /// Points fixed by every listed element.
  Bitset fixed_mask(const std::vector<int>& elems) const {
    Bitset m = Bitset::full(size_);
    for (int g : elems) {
      Bitset f(size_);
      for (int p = 0; p < size_; ++p)
        if (act_[p][g] == p) f.insert(p);
      m &= f;
    }
    return m;
  }

  /// X^K for a subgroup K (monotone decreasing in K).
  std::vector<int> fixed_points(const Subgroup& k) const {
    if (!k.parent().same_object(group_)) throw DomainError("subgroup of a different group");
    return fixed_mask(k.elements()).elements();
  }

  Subgroup isotropy(int p) const {
    Bitset s(group_.order());
    for (int g = 0; g < group_.order(); ++g)
      if (act_[p][g] == p) s.insert(g);
    return Subgroup(group_, std::move(s));
  }

  std::vector<std::vector<int>> orbits() const {
    std::vector<std::vector<int>> out;
    Bitset seen(size_);
    for (int p = 0; p < size_; ++p) {
      if (seen.contains(p)) continue;
      std::vector<int> orbit;
      std::vector<int> stack{p};
      seen.insert(p);
      while (!stack.empty()) {
        int q = stack.back();
        stack.pop_back();
        orbit.push_back(q);
        for (int g = 0; g < group_.order(); ++g) {
          int r = act_[q][g];
          if (!seen.contains(r)) {
            seen.insert(r);
            stack.push_back(r);
          }
        }
      }
      std::sort(orbit.begin(), orbit.end());
      out.push_back(std::move(orbit));
    }
    return out;
  }

  int orbit_count() const { return static_cast<int>(orbits().size()); }

  /// X^([K]): points whose isotropy subgroup lies in the class.
  std::vector<int> stratum_exact(const SubgroupConjClass& cls) const {
    if (!cls.parent().same_object(group_)) throw DomainError("class of a different group");
    std::vector<int> out;
    for (int p = 0; p < size_; ++p)
      if (cls.contains_set(isotropy(p).members())) out.push_back(p);
    return out;
  }

  /// X^[K]: points whose isotropy subgroup contains a member of the class.
  std::vector<int> stratum_containing(const SubgroupConjClass& cls) const {
    if (!cls.parent().same_object(group_)) throw DomainError("class of a different group");
    std::vector<int> out;
    for (int p = 0; p < size_; ++p) {
      Bitset iso = isotropy(p).members();
      for (const auto& s : cls.member_sets())
        if (s.is_subset_of(iso)) {
          out.push_back(p);
          break;
        }
    }
    return out;
  }

  /// The sub-G-set on an invariant point set, over the same group. Point i of
  /// the result is points[i].
  GSet restrict_points(const std::vector<int>& points, std::string label = "") const {
    std::vector<int> pos(size_, -1);
    for (int i = 0; i < static_cast<int>(points.size()); ++i) pos[points[i]] = i;
    std::vector<std::vector<int>> act(points.size(), std::vector<int>(group_.order()));
    for (int i = 0; i < static_cast<int>(points.size()); ++i)
      for (int g = 0; g < group_.order(); ++g) {
        int q = act_[points[i]][g];
        if (pos[q] < 0) throw DomainError("point set is not invariant");
        act[i][g] = pos[q];
      }
    return GSet(group_, std::move(act), std::move(label));
  }

  /// The action of a subgroup C on an invariant point set, as a G-set over
  /// the abstract group of C.
  GSet restrict_to_subgroup(const Subgroup& c, const std::vector<int>& points) const {
    if (!c.parent().same_object(group_)) throw DomainError("subgroup of a different group");
    auto [h, elems] = c.as_group();
    std::vector<int> pos(size_, -1);
    for (int i = 0; i < static_cast<int>(points.size()); ++i) pos[points[i]] = i;
    std::vector<std::vector<int>> act(points.size(), std::vector<int>(h.order()));
    for (int i = 0; i < static_cast<int>(points.size()); ++i)
      for (int j = 0; j < h.order(); ++j) {
        int q = act_[points[i]][elems[j]];
        if (pos[q] < 0) throw DomainError("point set is not invariant under the subgroup");
        act[i][j] = pos[q];
      }
    return GSet(h, std::move(act), "");
  }

  const std::vector<std::vector<int>>& action_table() const { return act_; }

private:
  GSet(FiniteGroup group, std::vector<std::vector<int>> action, std::string label)
      : group_(std::move(group)), size_(static_cast<int>(action.size())),
        act_(std::move(action)), label_(std::move(label)) {
    validate();
  }

  void validate() const {
    const int n = group_.order();
    for (const auto& row : act_) {
      if (static_cast<int>(row.size()) != n) throw DomainError("action row has wrong length");
      for (int q : row)
        if (q < 0 || q >= size_) throw DomainError("action image out of range");
    }
    for (int p = 0; p < size_; ++p)
      if (act_[p][0] != p) throw DomainError("identity does not act trivially");
    for (int p = 0; p < size_; ++p)
      for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h)
          if (act_[act_[p][g]][h] != act_[p][group_.mul(h, g)])
            throw DomainError("left action law fails");
  }

  FiniteGroup group_;
  int size_;
  std::vector<std::vector<int>> act_;
  std::string label_;
};

/// Disjoint union of two G-sets over the same group (x's points first).
inline GSet disjoint_union(const GSet& x, const GSet& y) {
  if (!x.group().same_object(y.group()))
    throw DomainError("disjoint union requires the same acting group");
  std::vector<std::vector<int>> act;
  act.reserve(x.size() + y.size());
  for (int p = 0; p < x.size(); ++p) act.push_back(x.action_table()[p]);
  for (int p = 0; p < y.size(); ++p) {
    std::vector<int> row = y.action_table()[p];
    for (int& q : row) q += x.size();
    act.push_back(std::move(row));
  }
  return GSet::from_action(x.group(), std::move(act), x.label() + "+" + y.label());
}

inline GSet GSet::free_copies(const FiniteGroup& g, int k) {
  GSet s = translation(g);
  GSet out = s;
  for (int i = 1; i < k; ++i) out = disjoint_union(out, s);
  return out;
}

/// Product (X1 x X2, G1 x G2); point (p, q) has index p*|X2| + q, matching
/// the element indexing of direct_product.
inline GSet gset_product(const GSet& x, const GSet& y) {
  FiniteGroup g = direct_product(x.group(), y.group());
  const int nb = y.group().order();
  std::vector<std::vector<int>> act(static_cast<std::size_t>(x.size()) * y.size(),
                                    std::vector<int>(g.order()));
  for (int p = 0; p < x.size(); ++p)
    for (int q = 0; q < y.size(); ++q)
      for (int a = 0; a < x.group().order(); ++a)
        for (int b = 0; b < nb; ++b)
          act[p * y.size() + q][a * nb + b] = x.apply(a, p) * y.size() + y.apply(b, q);
  return GSet::from_action(std::move(g), std::move(act), x.label() + "*" + y.label());
}

/// The induced H-set (H x X) / ~ along an injective embedding G -> H, with
/// (h, x) ~ (h.emb(g), g^-1.x) and H acting on the first coordinate. Points
/// are equivalence classes ordered by their minimal pair index h*|X| + x.
inline GSet induce(const GSet& x, const FiniteGroup& h, const Homomorphism& emb,
                   int size_cap = kDefaultGSetSizeCap) {
  if (!emb.source().same_object(x.group()))
    throw DomainError("embedding source differs from the acting group");
  if (!emb.target().same_object(h)) throw DomainError("embedding target differs from H");
  if (!emb.is_injective()) throw DomainError("induction requires an injective embedding");
  const int ng = x.group().order(), nh = h.order();
  const long long induced_size = static_cast<long long>(nh) * x.size() / ng;
  if (induced_size > size_cap)
    throw CapExceededError("induced set size " + std::to_string(induced_size) +
                           " exceeds cap " + std::to_string(size_cap));
  const int total = nh * x.size();
  std::vector<int> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  auto idx = [&](int hh, int p) { return hh * x.size() + p; };
  for (int hh = 0; hh < nh; ++hh)
    for (int p = 0; p < x.size(); ++p)
      for (int g = 0; g < ng; ++g)
        unite(idx(hh, p), idx(h.mul(hh, emb(g)), x.apply(x.group().inv(g), p)));
  std::vector<int> root_index(total, -1);
  int count = 0;
  for (int v = 0; v < total; ++v)
    if (find(v) == v) root_index[v] = count++;
  if (count != induced_size) throw Error("induced set has unexpected size");  // sanity
  std::vector<std::vector<int>> act(count, std::vector<int>(nh, -1));
  for (int hh = 0; hh < nh; ++hh)
    for (int p = 0; p < x.size(); ++p) {
      int from = root_index[find(idx(hh, p))];
      for (int k = 0; k < nh; ++k) {
        int to = root_index[find(idx(h.mul(k, hh), p))];
        if (act[from][k] >= 0 && act[from][k] != to)
          throw Error("induced action is not well-defined");  // sanity
        act[from][k] = to;
      }
    }
  return GSet::from_action(h, std::move(act), "ind(" + x.label() + ")");
}

/// Equivariant isomorphism over the same group: decompose into orbits and
/// match them by the conjugacy class of their isotropy subgroups (a transitive
/// G-set is determined by that class).
inline bool equivariant_isomorphic(const GSet& x, const GSet& y) {
  if (!x.group().same_object(y.group())) throw DomainError("G-sets over different groups");
  if (x.size() != y.size()) return false;
  auto profile = [](const GSet& s) {
    std::map<int, int> classes;  // subgroup class index -> multiplicity
    for (const auto& orbit : s.orbits())
      classes[s.group().subgroup_class_index(s.isotropy(orbit[0]).members())]++;
    return classes;
  };
  return profile(x) == profile(y);
}

}  // namespace orbchi
