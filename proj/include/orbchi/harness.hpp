#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "orbchi/catalog.hpp"
#include "orbchi/euler.hpp"
#include "orbchi/hom.hpp"
#include "orbchi/linalg.hpp"
#include "orbchi/ring.hpp"

namespace orbchi {

struct UniverseEntry {
  std::string name;
  FiniteGroup group;
  CanonicalKey key;
};

/// The catalog classes of order <= max_order, sorted by (order, key bytes).
/// Both matrix rows (source groups A') and columns (target classes) range
/// over this list.
inline std::vector<UniverseEntry> build_universe(int max_order) {
  std::vector<UniverseEntry> out;
  for (const auto& e : small_groups_catalog(max_order))
    out.push_back({e.name, e.group, e.group.canonical_key()});
  std::sort(out.begin(), out.end(), [](const UniverseEntry& a, const UniverseEntry& b) {
    return a.key < b.key;  // the order byte leads, so this sorts by order first
  });
  return out;
}

/// Rep- and FRep-count matrices over a universe: rep[i][j] = |Rep_w(U_i, U_j)|
/// and frep[i][j] = |FRep_w(U_i, U_j)|. Construction verifies the entrywise
/// consistency rep[i][j] = sum over normal K of U_i of |FRep_w(U_i/K, U_j)|.
struct CountMatrices {
  std::vector<UniverseEntry> universe;
  Omega omega = Omega::Inner;
  std::vector<std::vector<long long>> rep;
  std::vector<std::vector<long long>> frep;
};

inline CountMatrices build_matrices(int max_order, Omega w,
                                    long long budget_limit = kDefaultBudget) {
  CountMatrices m;
  m.universe = build_universe(max_order);
  m.omega = w;
  const int s = static_cast<int>(m.universe.size());
  m.rep.assign(s, std::vector<long long>(s, 0));
  m.frep.assign(s, std::vector<long long>(s, 0));
  for (int i = 0; i < s; ++i) {
    const FgGroupSpec src = FgGroupSpec::finite(m.universe[i].group, m.universe[i].name);
    for (int j = 0; j < s; ++j) {
      m.rep[i][j] = rep_count(src, m.universe[j].group, w, budget_limit);
      m.frep[i][j] = frep_count(src, m.universe[j].group, w, budget_limit);
    }
  }
  // Entrywise restatement of the orbit decomposition over quotients.
  for (int i = 0; i < s; ++i) {
    const FiniteGroup& a = m.universe[i].group;
    std::vector<FiniteGroup> quotients;
    for (const auto& k : a.normal_subgroups()) quotients.push_back(a.quotient_by(k).first);
    for (int j = 0; j < s; ++j) {
      long long sum = 0;
      for (const auto& q : quotients)
        sum += frep_count(FgGroupSpec::finite(q), m.universe[j].group, w, budget_limit);
      if (sum != m.rep[i][j])
        throw Error("rep/frep quotient consistency failed at (" + m.universe[i].name + ", " +
                    m.universe[j].name + ")");
    }
  }
  return m;
}

/// Memoized matrices: the entries are deterministic, and several commands
/// (verification, reconstruction, round-trips) reuse the same universe.
inline const CountMatrices& build_matrices_cached(int max_order, Omega w,
                                                  long long budget_limit = kDefaultBudget) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, CountMatrices> cache;
  const std::pair<int, int> key{max_order, static_cast<int>(w)};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  CountMatrices m = build_matrices(max_order, w, budget_limit);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(m)).first->second;
}

/// Report of the faithful-count triangularity structure: with the universe
/// ordered by size, frep[i][j] = 0 whenever the source is larger than the
/// target or is a non-isomorphic group of the same order, and every diagonal
/// entry is positive (the identity embedding exists).
struct TriangularityReport {
  bool strictly_upper_triangular = true;
  bool positive_diagonal = true;
  std::vector<long long> diagonal;
  bool pass() const { return strictly_upper_triangular && positive_diagonal; }
};

inline TriangularityReport check_triangularity(const CountMatrices& m) {
  TriangularityReport r;
  const int s = static_cast<int>(m.universe.size());
  for (int i = 0; i < s; ++i) {
    r.diagonal.push_back(m.frep[i][i]);
    if (m.frep[i][i] < 1) r.positive_diagonal = false;
    for (int j = 0; j < i; ++j)
      if (m.frep[i][j] != 0) r.strictly_upper_triangular = false;
  }
  return r;
}

/// Randomized check that a combination of Rep-counts vanishes for every
/// catalog source iff the matching combination of FRep-counts does.
struct ReductionReport {
  int max_order = 0;
  Omega omega = Omega::Inner;
  unsigned long long seed = 0;
  int trials = 0;
  int checked = 0;
  std::optional<std::vector<long long>> counterexample;
  bool pass() const { return !counterexample.has_value(); }
};

inline ReductionReport verify_reduction_lemma(int max_order, Omega w, int trials,
                                              unsigned long long seed,
                                              long long budget_limit = kDefaultBudget) {
  const CountMatrices& m = build_matrices_cached(max_order, w, budget_limit);
  const int s = static_cast<int>(m.universe.size());
  ReductionReport rep;
  rep.max_order = max_order;
  rep.omega = w;
  rep.seed = seed;
  rep.trials = trials;
  std::mt19937_64 rng(seed);
  auto run_vector = [&](const std::vector<long long>& a) {
    bool rep_all_zero = true, frep_all_zero = true;
    for (int i = 0; i < s; ++i) {
      long long rsum = 0, fsum = 0;
      for (int j = 0; j < s; ++j) {
        rsum += a[j] * m.rep[i][j];
        fsum += a[j] * m.frep[i][j];
      }
      if (rsum != 0) rep_all_zero = false;
      if (fsum != 0) frep_all_zero = false;
    }
    ++rep.checked;
    if (rep_all_zero != frep_all_zero) rep.counterexample = a;
  };
  run_vector(std::vector<long long>(s, 0));
  for (int t = 0; t < trials && !rep.counterexample; ++t) {
    std::vector<long long> a(s);
    for (auto& v : a) v = static_cast<long long>(rng() % 21) - 10;
    run_vector(a);
  }
  return rep;
}

/// Exact column rank of the Rep-count matrix: full rank means the only
/// vanishing combination is zero.
struct RankReport {
  int max_order = 0;
  Omega omega = Omega::Inner;
  int universe_size = 0;
  int rank = 0;
  TriangularityReport triangularity;
  bool pass() const { return rank == universe_size && triangularity.pass(); }
};

inline RankReport verify_vanishing_theorem(int max_order, Omega w,
                                           long long budget_limit = kDefaultBudget) {
  const CountMatrices& m = build_matrices_cached(max_order, w, budget_limit);
  RankReport r;
  r.max_order = max_order;
  r.omega = w;
  r.universe_size = static_cast<int>(m.universe.size());
  RationalMatrix mat(m.universe.size(), std::vector<Rational>(m.universe.size()));
  for (std::size_t i = 0; i < m.universe.size(); ++i)
    for (std::size_t j = 0; j < m.universe.size(); ++j) mat[i][j] = Rational(m.rep[i][j]);
  r.rank = exact_rank(std::move(mat));
  r.triangularity = check_triangularity(m);
  return r;
}

/// Recovers the unique ring element r with chi^(A' x Z)(r) = values[A'] for
/// every catalog A' of order <= max_order, by exact elimination on the
/// Rep-count matrix (inner automorphisms). The solution must be integral.
inline RingElement reconstruct(const std::map<std::string, Rational>& values, int max_order,
                               long long budget_limit = kDefaultBudget) {
  const CountMatrices& m = build_matrices_cached(max_order, Omega::Inner, budget_limit);
  const int s = static_cast<int>(m.universe.size());
  std::vector<Rational> rhs(s);
  for (int i = 0; i < s; ++i) {
    auto it = values.find(m.universe[i].name);
    if (it == values.end())
      throw DomainError("missing value for catalog group " + m.universe[i].name);
    rhs[i] = it->second;
  }
  RationalMatrix mat(s, std::vector<Rational>(s));
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) mat[i][j] = Rational(m.rep[i][j]);
  std::vector<Rational> sol = solve_square(std::move(mat), std::move(rhs));
  RingElement out;
  for (int j = 0; j < s; ++j) {
    if (!sol[j].is_integer())
      throw IntegralityError("reconstructed coefficient for " + m.universe[j].name +
                             " is not an integer: " + sol[j].str());
    out.add_term(m.universe[j].key, sol[j].as_integer());
  }
  return out;
}

/// Forward evaluation of all chi^(A' x Z)(X, G) by direct enumeration (never
/// through the ring), for every catalog A' of order <= max_order.
inline std::map<std::string, Rational> chi_product_values(const GSet& x, int max_order,
                                                          long long budget_limit = kDefaultBudget) {
  std::map<std::string, Rational> values;
  for (const auto& e : build_universe(max_order)) {
    FgGroupSpec spec = e.group.order() == 1
                           ? FgGroupSpec::free_abelian(1)
                           : FgGroupSpec::product_with_free(e.group, 1);
    values[e.name] = chi_direct(spec, x, budget_limit);
  }
  return values;
}

/// End-to-end demonstration of the main reconstruction: compute the
/// chi^(A' x Z) values of a G-set by direct enumeration and invert them. The
/// result equals the universal Euler characteristic whenever the isotropy
/// classes of x lie within the universe.
inline RingElement universal_from_chi(const GSet& x, int max_order,
                                      long long budget_limit = kDefaultBudget) {
  return reconstruct(chi_product_values(x, max_order, budget_limit), max_order, budget_limit);
}

// ---------------------------------------------------------------------------
// Property-suite drivers shared by the verify commands and the acceptance
// tests.
// ---------------------------------------------------------------------------

struct PropertyReport {
  int checked = 0;
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};

/// The source groups used for the induction matrix: Z, Z^2, Z2 x Z, S3 x Z.
inline std::vector<FgGroupSpec> default_induction_specs() {
  return {FgGroupSpec::free_abelian(1), FgGroupSpec::free_abelian(2),
          FgGroupSpec::product_with_free(catalog_find("Z2")->group, 1, "Z2xZ"),
          FgGroupSpec::product_with_free(catalog_find("S3")->group, 1, "S3xZ")};
}

/// Checks chi^(A)(X, G) = chi^(A)(Ind_G^H X, H) for every nested pair G <= H
/// realized inside catalog groups of order <= max_order, with X ranging over
/// the coset spaces of G. When check_factoring is set, both sides are also
/// compared against the evaluation through the universal Euler
/// characteristic. Values of specs with a free factor are checked to be
/// integers.
inline PropertyReport verify_induction_property(int max_order,
                                                const std::vector<FgGroupSpec>& specs,
                                                bool check_factoring = false,
                                                long long budget_limit = kDefaultBudget,
                                                int size_cap = kDefaultGSetSizeCap) {
  PropertyReport report;
  auto has_free = [](const FgGroupSpec& a) {
    return a.kind() == FgGroupSpec::Kind::FreeAbelian ||
           a.kind() == FgGroupSpec::Kind::ProductWithFree;
  };
  for (const auto& entry : small_groups_catalog(max_order)) {
    const FiniteGroup& h = entry.group;
    for (const auto& sub : h.all_subgroups()) {
      Homomorphism emb = sub.embedding();
      const FiniteGroup& g = emb.source();
      for (const auto& cls : g.subgroup_classes()) {
        GSet x = GSet::coset_space(g, cls.representative());
        GSet ind = induce(x, h, emb, size_cap);
        for (const auto& a : specs) {
          Rational lhs = chi_direct(a, x, budget_limit);
          Rational rhs = chi_direct(a, ind, budget_limit);
          ++report.checked;
          auto context = [&] {
            return a.name() + " on " + entry.name + " >= G" + std::to_string(g.order()) +
                   ", X=G/K" + std::to_string(cls.subgroup_order());
          };
          if (lhs != rhs)
            report.failures.push_back("induction: " + context() + ": " + lhs.str() +
                                      " != " + rhs.str());
          if (has_free(a) && !(lhs.is_integer() && rhs.is_integer()))
            report.failures.push_back("integrality: " + context() + ": " + lhs.str() + ", " +
                                      rhs.str());
          if (check_factoring) {
            if (chi_on_ring(a, universal_euler(x), budget_limit) != lhs)
              report.failures.push_back("factoring: " + context());
            if (chi_on_ring(a, universal_euler(ind), budget_limit) != rhs)
              report.failures.push_back("factoring (induced): " + context());
          }
        }
      }
    }
  }
  return report;
}

/// Checks chi^(A)(X1 x X2, G1 x G2) = chi^(A)(X1, G1) * chi^(A)(X2, G2) over
/// catalog pairs whose product order stays within the cap, with each factor
/// ranging over the one-point set and the translation action.
inline PropertyReport verify_multiplicativity_property(int max_product_order,
                                                       const std::vector<FgGroupSpec>& specs,
                                                       long long budget_limit = kDefaultBudget) {
  PropertyReport report;
  auto catalog = small_groups_catalog_all();
  for (const auto& e1 : catalog) {
    for (const auto& e2 : catalog) {
      if (e1.group.order() * e2.group.order() > max_product_order) continue;
      const GSet x1s[] = {GSet::one_point(e1.group), GSet::translation(e1.group)};
      const GSet x2s[] = {GSet::one_point(e2.group), GSet::translation(e2.group)};
      for (const auto& x1 : x1s)
        for (const auto& x2 : x2s)
          for (const auto& a : specs) {
            ++report.checked;
            if (!multiplicativity_holds(a, x1, x2, budget_limit))
              report.failures.push_back("multiplicativity: " + a.name() + " on (" + e1.name +
                                        "," + e2.name + ") sizes " + std::to_string(x1.size()) +
                                        "x" + std::to_string(x2.size()));
          }
    }
  }
  return report;
}

/// Checks both counting forms of the kernel/image decomposition for all
/// catalog pairs of order <= max_order under the given automorphism choice.
inline PropertyReport verify_decomposition_property(int max_order, Omega w,
                                                    long long budget_limit = kDefaultBudget) {
  PropertyReport report;
  auto catalog = small_groups_catalog(max_order);
  for (const auto& ea : catalog)
    for (const auto& eb : catalog) {
      ++report.checked;
      if (!hom_decomposition_holds(ea.group, eb.group, w, budget_limit))
        report.failures.push_back(std::string("decomposition: (") + ea.name + "," + eb.name +
                                  ") omega=" + omega_name(w));
    }
  return report;
}

// ---------------------------------------------------------------------------
// Seeded random inputs for the property suites. Randomness is drawn from a
// mt19937_64 with modulo reduction, so identical seeds give identical inputs
// on every platform.
// ---------------------------------------------------------------------------

/// A random G-set: a disjoint union of 1..3 coset spaces of random subgroups.
inline GSet random_gset(const FiniteGroup& g, std::mt19937_64& rng) {
  auto subs = g.all_subgroups();
  const int orbits = 1 + static_cast<int>(rng() % 3);
  std::optional<GSet> out;
  for (int i = 0; i < orbits; ++i) {
    GSet piece = GSet::coset_space(g, subs[rng() % subs.size()]);
    out = out ? disjoint_union(*out, piece) : piece;
  }
  return *out;
}

/// A random integer ring element supported on the given universe, with
/// coefficients in [-10, 10].
inline RingElement random_ring_element(const std::vector<UniverseEntry>& universe,
                                       std::mt19937_64& rng) {
  RingElement r;
  for (const auto& e : universe)
    r.add_term(e.key, static_cast<long long>(rng() % 21) - 10);
  return r;
}

}  // namespace orbchi
