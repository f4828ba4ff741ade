#pragma once

#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "orbchi/group.hpp"

namespace orbchi {

/// A finite presentation: relators are flattened words in signed 1-based
/// generator indices (+k = generator k-1, -k = its inverse).
struct PresentationSpec {
  int gen_count = 0;
  std::vector<std::vector<int>> relators;
  std::string text;  // original source text, for display
};

/// A finitely generated source group: a finite group, a free abelian group,
/// a product finite x Z^k, or a finite presentation. Presentations are used
/// only as homomorphism sources and are never realized as finite groups.
class FgGroupSpec {
public:
  enum class Kind { Finite, FreeAbelian, ProductWithFree, Presentation };

  static FgGroupSpec finite(FiniteGroup g, std::string name = "") {
    FgGroupSpec s;
    s.kind_ = Kind::Finite;
    s.finite_ = std::move(g);
    s.name_ = name.empty() ? s.finite_.label() : std::move(name);
    return s;
  }

  static FgGroupSpec free_abelian(int rank) {
    if (rank < 0) throw DomainError("free rank must be nonnegative");
    FgGroupSpec s;
    s.kind_ = rank == 0 ? Kind::Finite : Kind::FreeAbelian;
    s.rank_ = rank;
    s.name_ = rank == 0 ? "Z1" : (rank == 1 ? "Z" : "Z^" + std::to_string(rank));
    return s;
  }

  static FgGroupSpec product_with_free(FiniteGroup g, int rank, std::string name = "") {
    if (rank < 1) throw DomainError("product-with-free rank must be at least 1");
    FgGroupSpec s;
    s.kind_ = Kind::ProductWithFree;
    s.finite_ = std::move(g);
    s.rank_ = rank;
    s.name_ = name.empty()
                  ? s.finite_.label() + (rank == 1 ? "xZ" : "xZ^" + std::to_string(rank))
                  : std::move(name);
    return s;
  }

  static FgGroupSpec presentation(PresentationSpec p) {
    for (const auto& rel : p.relators)
      for (int t : rel)
        if (t == 0 || std::abs(t) > p.gen_count)
          throw DomainError("relator references an undeclared generator");
    FgGroupSpec s;
    s.kind_ = Kind::Presentation;
    s.pres_ = std::move(p);
    s.name_ = s.pres_.text.empty() ? "pres" : s.pres_.text;
    return s;
  }

  Kind kind() const { return kind_; }
  const FiniteGroup& finite_part() const { return finite_; }
  int free_rank() const { return rank_; }
  const PresentationSpec& presentation_spec() const { return pres_; }
  const std::string& name() const { return name_; }

  /// Number of generator images a homomorphism search must choose.
  int generator_count() const {
    switch (kind_) {
      case Kind::Finite: return static_cast<int>(finite_.min_generating_set().size());
      case Kind::FreeAbelian: return rank_;
      case Kind::ProductWithFree:
        return static_cast<int>(finite_.min_generating_set().size()) + rank_;
      case Kind::Presentation: return pres_.gen_count;
    }
    return 0;
  }

private:
  Kind kind_ = Kind::Finite;
  FiniteGroup finite_;  // trivial unless Finite/ProductWithFree
  int rank_ = 0;
  PresentationSpec pres_;
  std::string name_;
};

/// A complete, duplicate-free enumeration of Hom(A, B) (or Mono(A, B)).
/// Image rows are tuples whose layout depends on the source kind:
///   Finite            full element-image vector, length |A|
///   FreeAbelian(k)    the k generator images (a commuting k-tuple)
///   ProductWithFree   full image vector of the finite part ++ k tuple images
///   Presentation(m)   the m generator images
struct HomSet {
  FgGroupSpec source;
  FiniteGroup target;
  std::vector<std::vector<int>> images;

  long long count() const { return static_cast<long long>(images.size()); }

  /// Target elements generating the image subgroup of the given row; fixed
  /// sets of the image can be computed by intersecting over these alone.
  std::vector<int> image_generators(std::size_t row) const {
    const auto& im = images[row];
    std::vector<int> out;
    switch (source.kind()) {
      case FgGroupSpec::Kind::Finite:
        for (int g : source.finite_part().min_generating_set()) out.push_back(im[g]);
        break;
      case FgGroupSpec::Kind::FreeAbelian:
      case FgGroupSpec::Kind::Presentation:
        out = im;
        break;
      case FgGroupSpec::Kind::ProductWithFree: {
        const int nf = source.finite_part().order();
        for (int g : source.finite_part().min_generating_set()) out.push_back(im[g]);
        for (std::size_t i = nf; i < im.size(); ++i) out.push_back(im[i]);
        break;
      }
    }
    return out;
  }
};

namespace detail {

/// Guard on |B|^generators before a search starts.
inline void check_search_space(const FgGroupSpec& a, const FiniteGroup& b, long long budget) {
  long long space = 1;
  for (int i = 0; i < a.generator_count(); ++i) {
    space *= b.order();
    if (space > budget)
      throw BudgetExceededError("search space |B|^" + std::to_string(a.generator_count()) +
                                " exceeds budget " + std::to_string(budget));
  }
}

/// All pairwise-commuting k-tuples with entries in a restricted subset,
/// built through centralizer chains. Appends `prefix ++ tuple` rows to out.
inline void commuting_tuples(const FiniteGroup& b, const Bitset& allowed, int k,
                             std::vector<int>& prefix, SearchBudget& budget,
                             std::vector<std::vector<int>>& out) {
  if (k == 0) {
    out.push_back(prefix);
    return;
  }
  for (int t = 0; t < b.order(); ++t) {
    if (!allowed.contains(t)) continue;
    budget.tick();
    Bitset next = allowed;
    Bitset cent(b.order());
    for (int x = 0; x < b.order(); ++x)
      if (b.commutes(x, t)) cent.insert(x);
    next &= cent;
    prefix.push_back(t);
    commuting_tuples(b, next, k - 1, prefix, budget, out);
    prefix.pop_back();
  }
}

inline Bitset centralizer_mask(const FiniteGroup& b, const std::vector<int>& elems) {
  Bitset c = Bitset::full(b.order());
  for (int e : elems) {
    Bitset ce(b.order());
    for (int x = 0; x < b.order(); ++x)
      if (b.commutes(x, e)) ce.insert(x);
    c &= ce;
  }
  return c;
}

inline std::vector<std::vector<int>> enumerate_presentation_homs(const PresentationSpec& p,
                                                                 const FiniteGroup& b,
                                                                 SearchBudget& budget) {
  const int m = p.gen_count;
  // A relator is checkable once all generators it mentions are assigned.
  std::vector<std::vector<std::size_t>> ready(m + 1);
  for (std::size_t r = 0; r < p.relators.size(); ++r) {
    int maxg = 0;
    for (int t : p.relators[r]) maxg = std::max(maxg, std::abs(t));
    ready[maxg].push_back(r);
  }
  std::vector<std::vector<int>> out;
  std::vector<int> img(m, -1);
  auto eval = [&](const std::vector<int>& word) {
    int acc = 0;
    for (int t : word) {
      int v = img[std::abs(t) - 1];
      acc = b.mul(acc, t > 0 ? v : b.inv(v));
    }
    return acc;
  };
  auto dfs = [&](auto&& self, int i) -> void {
    if (i == m) {
      out.push_back(img);
      return;
    }
    for (int t = 0; t < b.order(); ++t) {
      budget.tick();
      img[i] = t;
      bool ok = true;
      for (std::size_t r : ready[i + 1])
        if (eval(p.relators[r]) != 0) {
          ok = false;
          break;
        }
      if (ok) self(self, i + 1);
    }
    img[i] = -1;
  };
  if (m == 0) {
    out.push_back({});
    return out;
  }
  // ready[0] holds empty relators only (the identity word), vacuously true.
  dfs(dfs, 0);
  return out;
}

}  // namespace detail

/// Complete duplicate-free enumeration of Hom(A, B).
inline HomSet enumerate_homs(const FgGroupSpec& a, const FiniteGroup& b,
                             long long budget_limit = kDefaultBudget) {
  detail::check_search_space(a, b, budget_limit);
  SearchBudget budget(budget_limit);
  HomSet hs{a, b, {}};
  switch (a.kind()) {
    case FgGroupSpec::Kind::Finite: {
      hs.images = detail::enumerate_group_homs(a.finite_part(), b, budget);
      break;
    }
    case FgGroupSpec::Kind::FreeAbelian: {
      std::vector<int> prefix;
      detail::commuting_tuples(b, Bitset::full(b.order()), a.free_rank(), prefix, budget,
                               hs.images);
      break;
    }
    case FgGroupSpec::Kind::ProductWithFree: {
      auto finite_homs = detail::enumerate_group_homs(a.finite_part(), b, budget);
      for (const auto& fh : finite_homs) {
        std::vector<int> gen_imgs;
        for (int g : a.finite_part().min_generating_set()) gen_imgs.push_back(fh[g]);
        Bitset cent = detail::centralizer_mask(b, gen_imgs);
        std::vector<std::vector<int>> tuples;
        std::vector<int> prefix;
        detail::commuting_tuples(b, cent, a.free_rank(), prefix, budget, tuples);
        for (auto& t : tuples) {
          std::vector<int> row = fh;
          row.insert(row.end(), t.begin(), t.end());
          hs.images.push_back(std::move(row));
        }
      }
      break;
    }
    case FgGroupSpec::Kind::Presentation: {
      hs.images = detail::enumerate_presentation_homs(a.presentation_spec(), b, budget);
      break;
    }
  }
  return hs;
}

/// Injective homomorphisms only. The source must be realized as a finite
/// group; free and presentation sources are rejected.
inline HomSet enumerate_monos(const FgGroupSpec& a, const FiniteGroup& b,
                              long long budget_limit = kDefaultBudget) {
  if (a.kind() != FgGroupSpec::Kind::Finite)
    throw DomainError("mono enumeration requires a finite source group");
  const FiniteGroup& src = a.finite_part();
  HomSet hs{a, b, {}};
  if (src.order() > b.order() || b.order() % src.order() != 0) return hs;  // order obstruction
  detail::check_search_space(a, b, budget_limit);
  SearchBudget budget(budget_limit);
  detail::HomSearchOptions opt;
  opt.injective_only = true;
  hs.images = detail::enumerate_group_homs(src, b, budget, opt);
  return hs;
}

namespace detail {

/// Representative rows (minimal index per orbit) of the post-composition
/// action given by automorphism image vectors of the target.
inline std::vector<std::size_t> orbit_representatives(const std::vector<std::vector<int>>& homs,
                                                      const std::vector<std::vector<int>>& autos) {
  std::vector<std::size_t> reps;
  if (homs.empty()) return reps;
  if (autos.size() <= 1) {
    reps.resize(homs.size());
    std::iota(reps.begin(), reps.end(), 0);
    return reps;
  }
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < homs.size(); ++i) index.emplace(homs[i], static_cast<int>(i));
  std::vector<int> parent(homs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  std::vector<int> scratch;
  for (std::size_t i = 0; i < homs.size(); ++i) {
    for (const auto& th : autos) {
      scratch.resize(homs[i].size());
      for (std::size_t j = 0; j < homs[i].size(); ++j) scratch[j] = th[homs[i][j]];
      auto it = index.find(scratch);
      if (it == index.end()) throw Error("post-composition left the hom set");  // sanity
      int a = find(static_cast<int>(i)), c = find(it->second);
      if (a != c) parent[std::max(a, c)] = std::min(a, c);
    }
  }
  for (std::size_t i = 0; i < homs.size(); ++i)
    if (find(static_cast<int>(i)) == static_cast<int>(i)) reps.push_back(i);
  return reps;
}

inline long long orbit_count_under(const std::vector<std::vector<int>>& homs,
                                   const std::vector<std::vector<int>>& autos) {
  return static_cast<long long>(orbit_representatives(homs, autos).size());
}

}  // namespace detail

/// |Rep_w(A, B)|: orbits of the chosen automorphism subgroup of B acting on
/// Hom(A, B) by post-composition.
inline long long rep_count(const FgGroupSpec& a, const FiniteGroup& b, Omega w,
                           long long budget_limit = kDefaultBudget) {
  HomSet hs = enumerate_homs(a, b, budget_limit);
  return detail::orbit_count_under(hs.images, b.automorphism_images(w));
}

/// |FRep_w(A, B)|: the same orbit count on Mono(A, B).
inline long long frep_count(const FgGroupSpec& a, const FiniteGroup& b, Omega w,
                            long long budget_limit = kDefaultBudget) {
  HomSet hs = enumerate_monos(a, b, budget_limit);
  return detail::orbit_count_under(hs.images, b.automorphism_images(w));
}

/// Verifies both forms of the kernel/image decomposition of Hom(A, B) over
/// the normal subgroups of A:
///   |Hom(A,B)|   = sum_{K normal in A} |Mono(A/K, B)|
///   |Rep_w(A,B)| = sum_{K normal in A} |FRep_w(A/K, B)|
inline bool hom_decomposition_holds(const FiniteGroup& a, const FiniteGroup& b, Omega w,
                                    long long budget_limit = kDefaultBudget) {
  const FgGroupSpec src = FgGroupSpec::finite(a);
  const long long total = enumerate_homs(src, b, budget_limit).count();
  const long long orbit_total = rep_count(src, b, w, budget_limit);
  long long mono_sum = 0, frep_sum = 0;
  for (const auto& k : a.normal_subgroups()) {
    auto [q, proj] = a.quotient_by(k);
    (void)proj;
    const FgGroupSpec qs = FgGroupSpec::finite(q);
    mono_sum += enumerate_monos(qs, b, budget_limit).count();
    frep_sum += frep_count(qs, b, w, budget_limit);
  }
  return total == mono_sum && orbit_total == frep_sum;
}

}  // namespace orbchi
