#pragma once

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "orbchi/catalog.hpp"
#include "orbchi/gset.hpp"
#include "orbchi/harness.hpp"
#include "orbchi/hom.hpp"
#include "orbchi/ring.hpp"

namespace orbchi {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Group spec files
// ---------------------------------------------------------------------------

/// {"name": ..., "table": [[...], ...]} or {"name": ..., "degree": d,
/// "generators": [[...], ...]} with permutations as image arrays.
inline json group_to_json(const FiniteGroup& g) {
  json j;
  j["name"] = g.label();
  j["table"] = g.table_rows();
  return j;
}

inline FiniteGroup group_from_json(const json& j, int order_cap = kDefaultOrderCap) {
  if (!j.is_object()) throw ParseError("group spec must be a JSON object");
  std::string name = j.value("name", std::string());
  if (j.contains("table")) {
    std::vector<std::vector<int>> rows = j.at("table").get<std::vector<std::vector<int>>>();
    return FiniteGroup::from_table(rows, name);
  }
  if (j.contains("generators")) {
    if (!j.contains("degree")) throw ParseError("generator spec needs a degree");
    return FiniteGroup::from_generators(j.at("degree").get<int>(),
                                        j.at("generators").get<std::vector<std::vector<int>>>(),
                                        name, order_cap);
  }
  throw ParseError("group spec needs either a table or generators");
}

/// Resolves a group given by catalog name, "Z<n>" for any cyclic order, an
/// inline JSON object, or a path to a spec file.
inline FiniteGroup resolve_group(const std::string& text, int order_cap = kDefaultOrderCap) {
  if (const CatalogEntry* e = catalog_find(text)) return e->group;
  if (text.size() > 1 && text[0] == 'Z' &&
      std::all_of(text.begin() + 1, text.end(), [](char c) { return std::isdigit(c); })) {
    int n = std::stoi(text.substr(1));
    if (n < 1 || n > kMaxRepresentableOrder) throw ParseError("cyclic order out of range");
    return make_cyclic(n);
  }
  if (!text.empty() && text.front() == '{') {
    return group_from_json(json::parse(text), order_cap);
  }
  std::ifstream in(text);
  if (in) {
    json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw ParseError("bad group file '" + text + "': " + e.what());
    }
    return group_from_json(j, order_cap);
  }
  throw ParseError("unknown group '" + text + "'");
}

// ---------------------------------------------------------------------------
// G-set files: {"group": <name or spec>, "size": n, "action": [[...], ...]}
// with the action indexed [point][element].
// ---------------------------------------------------------------------------

inline json gset_to_json(const GSet& x) {
  json j;
  if (!x.label().empty()) j["name"] = x.label();
  // A catalog name is only safe when the acting group is literally the
  // catalog object; otherwise element indices would not line up.
  if (const CatalogEntry* e = catalog_find(x.group().label());
      e != nullptr && e->group.same_object(x.group()))
    j["group"] = x.group().label();
  else
    j["group"] = group_to_json(x.group());
  j["size"] = x.size();
  j["action"] = x.action_table();
  return j;
}

inline GSet gset_from_json(const json& j, int order_cap = kDefaultOrderCap) {
  if (!j.is_object()) throw ParseError("g-set spec must be a JSON object");
  FiniteGroup g;
  const auto& jg = j.at("group");
  if (jg.is_string())
    g = resolve_group(jg.get<std::string>(), order_cap);
  else
    g = group_from_json(jg, order_cap);
  auto action = j.at("action").get<std::vector<std::vector<int>>>();
  if (j.contains("size") && j.at("size").get<int>() != static_cast<int>(action.size()))
    throw ParseError("declared size does not match the action table");
  return GSet::from_action(std::move(g), std::move(action), j.value("name", std::string()));
}

inline GSet load_gset(const std::string& path, int order_cap = kDefaultOrderCap) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open g-set file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError("bad g-set file '" + path + "': " + e.what());
  }
  return gset_from_json(j, order_cap);
}

// ---------------------------------------------------------------------------
// Ring element files: [{"group": <name or spec>, "coeff": c}, ...] in
// deterministic (order, key bytes) order.
// ---------------------------------------------------------------------------

inline json ring_to_json(const RingElement& r) {
  json arr = json::array();
  for (const auto& [key, coeff] : r.terms()) {
    json term;
    if (auto name = catalog_name_for_key(key))
      term["group"] = *name;
    else {
      FiniteGroup rep = key.representative();
      json g;
      g["name"] = "G" + std::to_string(key.group_order()) + "_" + key.hex().substr(0, 12);
      g["table"] = rep.table_rows();
      term["group"] = g;
    }
    term["coeff"] = coeff;
    arr.push_back(term);
  }
  return arr;
}

inline RingElement ring_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("ring element must be a JSON array of terms");
  RingElement r;
  for (const auto& term : j) {
    FiniteGroup g;
    const auto& jg = term.at("group");
    if (jg.is_string())
      g = resolve_group(jg.get<std::string>(), kMaxRepresentableOrder);
    else
      g = group_from_json(jg, kMaxRepresentableOrder);
    r.add_term(g.canonical_key(), term.at("coeff").get<long long>());
  }
  return r;
}

// ---------------------------------------------------------------------------
// Values files for reconstruction:
// {"omega": "inner", "max_order": n, "values": {"<A' name>": int or "p/q"}}
// ---------------------------------------------------------------------------

inline json values_to_json(const std::map<std::string, Rational>& values, int max_order) {
  json j;
  j["omega"] = "inner";
  j["max_order"] = max_order;
  json v;
  for (const auto& [name, val] : values)
    v[name] = val.is_integer() ? json(val.as_integer()) : json(val.str());
  j["values"] = v;
  return j;
}

inline std::map<std::string, Rational> values_from_json(const json& j) {
  std::map<std::string, Rational> out;
  const json& v = j.contains("values") ? j.at("values") : j;
  if (!v.is_object()) throw ParseError("values must be a JSON object");
  for (auto it = v.begin(); it != v.end(); ++it) {
    if (it.value().is_number_integer())
      out[it.key()] = Rational(it.value().get<long long>());
    else if (it.value().is_string())
      out[it.key()] = parse_rational(it.value().get<std::string>());
    else
      throw ParseError("value for " + it.key() + " must be an integer or fraction string");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Presentation grammar:  pres:{gens: a b; rels: a^2, (a b)^3}
// Words are juxtapositions of factors; a factor is a generator or a
// parenthesized word, optionally raised to an integer power (negative powers
// invert).
// ---------------------------------------------------------------------------

namespace detail {

struct PresTokenizer {
  std::string s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (start == pos) throw ParseError("expected identifier in presentation");
    return s.substr(start, pos - start);
  }
  long long integer() {
    skip_ws();
    std::size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) throw ParseError("expected integer exponent in presentation");
    return std::stoll(s.substr(start, pos - start));
  }
};

inline std::vector<int> pres_invert(const std::vector<int>& w) {
  std::vector<int> out(w.rbegin(), w.rend());
  for (int& t : out) t = -t;
  return out;
}

inline std::vector<int> pres_parse_word(PresTokenizer& tk,
                                        const std::map<std::string, int>& gens);

inline std::vector<int> pres_parse_factor(PresTokenizer& tk,
                                          const std::map<std::string, int>& gens) {
  std::vector<int> atom;
  if (tk.peek() == '(') {
    ++tk.pos;
    atom = pres_parse_word(tk, gens);
    if (tk.peek() != ')') throw ParseError("unbalanced parenthesis in presentation");
    ++tk.pos;
  } else {
    std::string name = tk.ident();
    auto it = gens.find(name);
    if (it == gens.end()) throw ParseError("undeclared generator '" + name + "'");
    atom = {it->second + 1};
  }
  if (tk.peek() == '^') {
    ++tk.pos;
    long long e = tk.integer();
    if (e > 1000 || e < -1000) throw ParseError("exponent out of range");
    std::vector<int> base = e < 0 ? pres_invert(atom) : atom;
    std::vector<int> out;
    for (long long i = 0; i < std::llabs(e); ++i) out.insert(out.end(), base.begin(), base.end());
    return out;
  }
  return atom;
}

inline std::vector<int> pres_parse_word(PresTokenizer& tk,
                                        const std::map<std::string, int>& gens) {
  std::vector<int> out;
  while (!tk.done() && tk.peek() != ')' && tk.peek() != ',') {
    std::vector<int> f = pres_parse_factor(tk, gens);
    out.insert(out.end(), f.begin(), f.end());
    if (out.size() > 10000) throw ParseError("relator expansion too long");
  }
  return out;
}

}  // namespace detail

/// Parses the body between the braces of pres:{...}; also accepts the full
/// pres:{...} form.
inline PresentationSpec parse_presentation(const std::string& text) {
  std::string body = text;
  if (body.rfind("pres:", 0) == 0) body = body.substr(5);
  if (!body.empty() && body.front() == '{') {
    if (body.back() != '}') throw ParseError("unbalanced braces in presentation");
    body = body.substr(1, body.size() - 2);
  }
  std::map<std::string, int> gens;
  std::vector<std::string> gen_names;
  std::vector<std::vector<int>> relators;
  std::stringstream sections(body);
  std::string section;
  bool saw_gens = false;
  while (std::getline(sections, section, ';')) {
    auto colon = section.find(':');
    if (colon == std::string::npos) {
      if (section.find_first_not_of(" \t\n") == std::string::npos) continue;
      throw ParseError("presentation section needs 'gens:' or 'rels:'");
    }
    std::string key = section.substr(0, colon);
    key.erase(std::remove_if(key.begin(), key.end(),
                             [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
              key.end());
    std::string content = section.substr(colon + 1);
    if (key == "gens") {
      saw_gens = true;
      std::stringstream ss(content);
      std::string name;
      while (ss >> name) {
        if (gens.count(name)) throw ParseError("duplicate generator '" + name + "'");
        gens[name] = static_cast<int>(gen_names.size());
        gen_names.push_back(name);
      }
    } else if (key == "rels") {
      std::vector<std::string> parts;
      std::string cur;
      int depth = 0;
      for (char c : content) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
          parts.push_back(cur);
          cur.clear();
        } else
          cur.push_back(c);
      }
      parts.push_back(cur);
      for (const auto& p : parts) {
        if (p.find_first_not_of(" \t\n") == std::string::npos) continue;
        detail::PresTokenizer tk{p};
        relators.push_back(detail::pres_parse_word(tk, gens));
        if (!tk.done()) throw ParseError("trailing input in relator '" + p + "'");
      }
    } else {
      throw ParseError("unknown presentation section '" + key + "'");
    }
  }
  if (!saw_gens) throw ParseError("presentation needs a gens: section");
  PresentationSpec spec;
  spec.gen_count = static_cast<int>(gen_names.size());
  spec.relators = std::move(relators);
  spec.text = "pres:{" + body + "}";
  return spec;
}

// ---------------------------------------------------------------------------
// A-spec mini-grammar: Zn | Z | Z^k | catalog names | products with 'x' |
// pres:{...}. Whole-string catalog names win over product splitting, and
// adjacent 'x'-separated tokens are re-joined greedily so catalog names that
// themselves contain 'x' still resolve.
// ---------------------------------------------------------------------------

namespace detail {

struct ASpecAtom {
  std::optional<FiniteGroup> finite;
  int free_rank = 0;
};

inline std::optional<ASpecAtom> a_spec_atom(const std::string& tok) {
  if (tok == "Z") return ASpecAtom{std::nullopt, 1};
  if (tok.rfind("Z^", 0) == 0) {
    const std::string rest = tok.substr(2);
    if (rest.empty() ||
        !std::all_of(rest.begin(), rest.end(), [](char c) { return std::isdigit(c); }))
      return std::nullopt;
    return ASpecAtom{std::nullopt, std::stoi(rest)};
  }
  if (const CatalogEntry* e = catalog_find(tok)) return ASpecAtom{e->group, 0};
  if (tok.size() > 1 && tok[0] == 'Z' &&
      std::all_of(tok.begin() + 1, tok.end(), [](char c) { return std::isdigit(c); })) {
    int n = std::stoi(tok.substr(1));
    if (n >= 1 && n <= kMaxRepresentableOrder) return ASpecAtom{make_cyclic(n), 0};
  }
  return std::nullopt;
}

}  // namespace detail

inline FgGroupSpec parse_fg_spec(const std::string& text_in) {
  std::string text = text_in;
  if (text.rfind("pres:", 0) == 0)
    return FgGroupSpec::presentation(parse_presentation(text));
  text.erase(std::remove_if(text.begin(), text.end(),
                            [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
             text.end());
  if (text.empty()) throw ParseError("empty group spec");
  if (auto atom = detail::a_spec_atom(text)) {
    if (atom->finite) return FgGroupSpec::finite(*atom->finite, text);
    return FgGroupSpec::free_abelian(atom->free_rank);
  }
  // Split on 'x' and re-join greedily (longest match first).
  std::vector<std::string> tokens;
  {
    std::string cur;
    for (char c : text) {
      if (c == 'x') {
        tokens.push_back(cur);
        cur.clear();
      } else
        cur.push_back(c);
    }
    tokens.push_back(cur);
  }
  FiniteGroup finite_acc;
  bool have_finite = false;
  int rank_acc = 0;
  std::size_t i = 0;
  while (i < tokens.size()) {
    bool matched = false;
    for (std::size_t j = tokens.size(); j-- > i && !matched;) {
      std::string joined = tokens[i];
      for (std::size_t k = i + 1; k <= j; ++k) joined += "x" + tokens[k];
      if (auto atom = detail::a_spec_atom(joined)) {
        if (atom->finite) {
          finite_acc = have_finite ? direct_product(finite_acc, *atom->finite) : *atom->finite;
          have_finite = true;
        }
        rank_acc += atom->free_rank;
        i = j + 1;
        matched = true;
      }
    }
    if (!matched) throw ParseError("cannot parse group spec part '" + tokens[i] + "'");
  }
  if (rank_acc == 0) return FgGroupSpec::finite(finite_acc, text);
  if (!have_finite || finite_acc.order() == 1) {
    FgGroupSpec s = FgGroupSpec::free_abelian(rank_acc);
    return s;
  }
  return FgGroupSpec::product_with_free(finite_acc, rank_acc, text);
}

// ---------------------------------------------------------------------------
// CSV helpers
// ---------------------------------------------------------------------------

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

inline std::string matrix_csv(const CountMatrices& m, bool faithful) {
  std::ostringstream os;
  os << (faithful ? "frep" : "rep");
  for (const auto& e : m.universe) os << "," << csv_escape(e.name);
  os << "\n";
  const auto& mat = faithful ? m.frep : m.rep;
  for (std::size_t i = 0; i < m.universe.size(); ++i) {
    os << csv_escape(m.universe[i].name);
    for (std::size_t j = 0; j < m.universe.size(); ++j) os << "," << mat[i][j];
    os << "\n";
  }
  return os.str();
}

}  // namespace orbchi
