#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cmfuse/cmfuse.hpp"

namespace cmfuse::support {

inline std::string data_path(const std::string& rel) { return std::string(CMFUSE_DATA_DIR) + "/" + rel; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct LibraryFixture {
  ComponentSet biblio1 = parse_component_set(read_file(data_path("library/biblio1.json")));
  ComponentSet biblio2 = parse_component_set(read_file(data_path("library/biblio2.json")));
  DomainOntology od = load_domain_ontology(read_file(data_path("library/library_domain.json")));

  const BusinessComponent& component(const ComponentSet& set, const std::string& name) const {
    for (const auto& c : set.components) {
      if (c.name == name) return c;
    }
    throw std::runtime_error("no component " + name);
  }
  ComponentOntology personne() const { return to_ontology(component(biblio1, "Personne"), od); }
  ComponentOntology lecteur() const { return to_ontology(component(biblio2, "Lecteur"), od); }
  ComponentOntology publication1() const { return to_ontology(component(biblio1, "Publication"), od); }
  ComponentOntology publication2() const { return to_ontology(component(biblio2, "Publication"), od); }
  std::vector<ComponentOntology> all() const {
    return {personne(), publication1(), lecteur(), publication2()};
  }
};

inline Concept atom(const std::string& raw, ConceptKind kind = ConceptKind::attribute) {
  Concept c;
  c.term = kind == ConceptKind::operation ? with_operation_marker(normalize_term(raw)) : normalize_term(raw);
  c.raw_label = raw;
  c.kind_tag = kind;
  return c;
}

inline Concept composite(const std::string& raw, std::vector<Concept> members,
                         ConceptKind kind = ConceptKind::component) {
  Concept c = atom(raw, kind);
  c.members = std::move(members);
  return c;
}

// ---- independent oracles --------------------------------------------------------

// Best total over every injective assignment of the smaller side into the
// larger one, divided by the larger arity.
inline Score brute_force_matching(const std::vector<std::vector<Score>>& grid) {
  const std::size_t rows = grid.size();
  const std::size_t cols = rows == 0 ? 0 : grid.front().size();
  const std::size_t n = std::max(rows, cols);
  if (rows == 0 || cols == 0) return Score::zero();
  const bool by_rows = rows <= cols;
  const std::size_t small = by_rows ? rows : cols;
  const std::size_t large = by_rows ? cols : rows;
  std::vector<std::size_t> perm(large);
  std::iota(perm.begin(), perm.end(), 0);
  Ratio best;
  do {
    Ratio total;
    for (std::size_t k = 0; k < small; ++k) {
      total += by_rows ? grid[k][perm[k]].value() : grid[perm[k]][k].value();
    }
    if (total > best) best = total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return Score{best / n};
}

// ---- generators -----------------------------------------------------------------

inline const std::vector<std::string>& word_pool() {
  static const std::vector<std::string> pool = {
      "nom",   "prénom", "âge",   "titre", "éditeur", "périodicité", "adresse", "code",
      "date",  "auteur", "isbn",  "numéro", "ville",  "pays",        "lire",    "consulter",
      "payer", "client", "tarif", "stock"};
  return pool;
}

// Random concept whose sibling members have pairwise distinct terms.
inline Concept random_concept(std::mt19937_64& rng, int depth, ConceptKind kind, std::size_t max_members = 4) {
  const auto& pool = word_pool();
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  Concept c = atom(pool[pick(rng)], kind);
  if (depth <= 0) return c;
  std::uniform_int_distribution<std::size_t> count(0, max_members);
  const std::size_t n = count(rng);
  std::set<std::pair<ConceptKind, Term>> seen;
  for (std::size_t i = 0; i < n; ++i) {
    const ConceptKind mk = std::bernoulli_distribution(0.75)(rng) ? ConceptKind::attribute : ConceptKind::operation;
    Concept m = random_concept(rng, std::bernoulli_distribution(0.2)(rng) ? depth - 1 : 0, mk, max_members);
    if (!seen.emplace(m.kind_tag, m.term).second) continue;
    c.members.push_back(std::move(m));
  }
  return c;
}

// Domain ontology over the word pool: random concepts with random term
// lists, producing both synonyms (several terms per concept) and homonyms
// (one term under several concepts).
inline DomainOntology random_ontology(std::mt19937_64& rng) {
  const auto& pool = word_pool();
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> concept_count(0, 8);
  std::vector<DomainConcept> concepts;
  std::vector<ThesaurusEntry> entries;
  const int n = concept_count(rng);
  for (int i = 0; i < n; ++i) {
    DomainConcept c{"C" + std::to_string(i), pool[pick(rng)], std::nullopt, {}};
    ThesaurusEntry e{c.id, {}};
    std::set<Term> seen{normalize_term(c.label)};
    const int terms = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int t = 0; t < terms; ++t) {
      std::string w = pool[pick(rng)];
      if (std::bernoulli_distribution(0.3)(rng)) w += "()";
      if (seen.insert(normalize_term(w)).second) e.terms.push_back(w);
    }
    concepts.push_back(std::move(c));
    entries.push_back(std::move(e));
  }
  return DomainOntology::from_parts(std::move(concepts), std::move(entries));
}

inline BusinessComponent random_component(std::mt19937_64& rng, const std::string& source, const std::string& name) {
  const auto& pool = word_pool();
  BusinessComponent c;
  c.name = name;
  c.source = source;
  c.kind = static_cast<Kind>(std::uniform_int_distribution<int>(0, 3)(rng));
  std::vector<std::string> words = pool;
  std::shuffle(words.begin(), words.end(), rng);
  const std::size_t attrs = std::uniform_int_distribution<std::size_t>(0, 4)(rng);
  const std::size_t ops = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
  std::size_t w = 0;
  for (std::size_t i = 0; i < attrs; ++i) {
    Attribute a{words[w++], std::nullopt, std::nullopt};
    if (std::bernoulli_distribution(0.3)(rng)) a.datatype = "string";
    c.attributes.push_back(a);
  }
  for (std::size_t i = 0; i < ops; ++i) c.operations.push_back({words[w++], std::nullopt, std::nullopt});
  if (std::bernoulli_distribution(0.3)(rng)) c.doc = "generated";
  return c;
}

inline ComponentSet random_set(std::mt19937_64& rng, const std::string& system, std::size_t max_components = 3) {
  static const std::vector<std::string> names = {"Client", "Commande", "Produit", "Facture", "Lecteur", "Livre"};
  ComponentSet set;
  set.system = system;
  std::vector<std::string> shuffled = names;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_components)(rng);
  for (std::size_t i = 0; i < n; ++i) set.components.push_back(random_component(rng, system, shuffled[i]));
  return set;
}

// Multiset of (name, kind, sorted member terms) for isomorphism checks.
inline std::multiset<std::string> shape_of(const ComponentSet& set) {
  std::multiset<std::string> out;
  for (const auto& c : set.components) {
    std::vector<std::string> terms;
    for (const auto& a : c.attributes) terms.push_back(normalize_term(a.name));
    for (const auto& o : c.operations) terms.push_back(with_operation_marker(normalize_term(o.name)));
    std::sort(terms.begin(), terms.end());
    std::string key = normalize_term(c.name) + "|" + std::string(to_string(c.kind));
    for (const auto& t : terms) key += "|" + t;
    out.insert(key);
  }
  return out;
}

// ---- shared property predicates ---------------------------------------------------

inline std::vector<ComponentOntology> ontologies_of(const ComponentSet& set, const DomainOntology& od) {
  std::vector<ComponentOntology> out;
  for (const auto& c : set.components) out.push_back(to_ontology(c, od));
  return out;
}

inline std::vector<Term> member_terms(const BusinessComponent& c) {
  std::vector<Term> out;
  for (const auto& a : c.attributes) out.push_back(normalize_term(a.name));
  for (const auto& o : c.operations) out.push_back(with_operation_marker(normalize_term(o.name)));
  return out;
}

inline bool any_term_anchors(const Concept& c, const DomainOntology& od) {
  if (!std::holds_alternative<AnchorNone>(od.anchor(c.term))) return true;
  if (!std::holds_alternative<AnchorNone>(od.anchor(strip_operation_marker(c.term)))) return true;
  for (const auto& m : c.members) {
    if (any_term_anchors(m, od)) return true;
  }
  return false;
}

inline bool siblings_non_synonymous(const Concept& c, const DomainOntology& od) {
  for (std::size_t i = 0; i < c.members.size(); ++i) {
    if (!siblings_non_synonymous(c.members[i], od)) return false;
    for (std::size_t j = i + 1; j < c.members.size(); ++j) {
      const auto a = detail::effective_anchor(c.members[i], od);
      const auto b = detail::effective_anchor(c.members[j], od);
      if (a && b && *a == *b) return false;
    }
  }
  return true;
}

// Two sources of up to three random components each.
inline std::vector<ComponentOntology> random_two_source_set(std::mt19937_64& rng, const DomainOntology& od) {
  auto set = ontologies_of(random_set(rng, "A"), od);
  const auto more = ontologies_of(random_set(rng, "B"), od);
  set.insert(set.end(), more.begin(), more.end());
  return set;
}

// Every input member survives verbatim, through an equivalence link, or
// under a source-qualified name. Returns the paths that did not.
inline std::vector<std::string> lost_members(const std::vector<ComponentOntology>& set, const MergedComponent& merged) {
  std::set<std::string> linked;
  for (const auto& [l, r] : merged.representation.equivalences) {
    linked.insert(l);
    linked.insert(r);
  }
  std::set<Term> output_terms;
  for (const auto& c : merged.result.components) {
    for (const auto& t : member_terms(c)) output_terms.insert(t);
  }
  std::vector<std::string> lost;
  for (const auto& ocm : set) {
    for (const auto& m : ocm.root.members) {
      const std::string path = ocm.source + "/" + ocm.origin + "/" + m.term;
      const Term qualified = normalize_term(ocm.source + "." + m.raw_label);
      const bool kept = output_terms.count(m.term) != 0 || linked.count(path) != 0 ||
                        output_terms.count(qualified) != 0 ||
                        output_terms.count(with_operation_marker(qualified)) != 0;
      if (!kept) lost.push_back(path);
    }
  }
  return lost;
}

// Independent count of root classes linked by equivalent/synonym_pair pairs.
inline std::size_t root_class_count(const std::vector<ComponentOntology>& set, const Alignment& al) {
  std::vector<std::size_t> parent(set.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  auto index_of = [&](const ConceptRef& r) {
    for (std::size_t k = 0; k < set.size(); ++k) {
      if (set[k].source == r.source && set[k].origin == r.origin) return k;
    }
    throw std::runtime_error("unknown root " + r.path());
  };
  for (const auto& c : al.correspondences) {
    if (!c.root_level()) continue;
    if (c.classification == Classification::equivalent || c.classification == Classification::synonym_pair) {
      parent[find(index_of(c.left))] = find(index_of(c.right));
    }
  }
  std::set<std::size_t> roots;
  for (std::size_t k = 0; k < set.size(); ++k) roots.insert(find(k));
  return roots.size();
}

// Merges a result set against a copy of itself. Empty when the result has
// synonymous components or synonymous sibling members, where a self-merge
// legitimately collapses further.
inline std::optional<ComponentSet> self_merge(const ComponentSet& first, const DomainOntology& od) {
  auto left = ontologies_of(first, od);
  ComponentSet twin = first;
  twin.system = "Twin";
  for (auto& c : twin.components) c.source = "Twin";
  const auto right = ontologies_of(twin, od);
  for (std::size_t x = 0; x < left.size(); ++x) {
    for (std::size_t y = 0; y < right.size(); ++y) {
      if (x != y && similarity_matrix(left[x], right[y], od).verdict == Verdict::synonym) return std::nullopt;
    }
    const auto& ms = left[x].root.members;
    for (std::size_t p = 0; p < ms.size(); ++p) {
      for (std::size_t q = 0; q < ms.size(); ++q) {
        if (p != q && sigma(ms[p], ms[q], od).is_one()) return std::nullopt;
      }
    }
  }
  left.insert(left.end(), right.begin(), right.end());
  return merge(align(left, od), left).result;
}

}  // namespace cmfuse::support
