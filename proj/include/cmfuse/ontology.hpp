#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cmfuse/error.hpp"
#include "cmfuse/json_util.hpp"
#include "cmfuse/term.hpp"

namespace cmfuse {

using ConceptId = std::string;

struct DomainConcept {
  ConceptId id;
  std::string label;
  std::optional<ConceptId> parent;
  std::vector<std::string> definitions;
};

struct ThesaurusEntry {
  ConceptId concept_id;
  std::vector<Term> terms;  // normalized, pairwise distinct
};

struct AnchorUnique {
  ConceptId id;
  friend bool operator==(const AnchorUnique&, const AnchorUnique&) = default;
};
struct AnchorAmbiguous {
  std::vector<ConceptId> ids;  // size >= 2, concept declaration order
  friend bool operator==(const AnchorAmbiguous&, const AnchorAmbiguous&) = default;
};
struct AnchorNone {
  friend bool operator==(const AnchorNone&, const AnchorNone&) = default;
};
using AnchorResult = std::variant<AnchorUnique, AnchorAmbiguous, AnchorNone>;

enum class ConceptRelation { same, homonym_shared_term, unrelated };

inline std::string_view to_string(ConceptRelation r) {
  switch (r) {
    case ConceptRelation::same: return "same";
    case ConceptRelation::homonym_shared_term: return "homonym_shared_term";
    case ConceptRelation::unrelated: return "unrelated";
  }
  return "unrelated";
}

// Domain model (concepts + taxonomy) paired with a thesaurus. Immutable once
// built; construct through load_domain_ontology() or from_parts().
class DomainOntology {
 public:
  DomainOntology() = default;

  // Validates and indexes. Entries sharing a concept id are merged; each
  // concept's label is added to its entry when missing.
  static DomainOntology from_parts(std::vector<DomainConcept> concepts,
                                   std::vector<ThesaurusEntry> thesaurus) {
    detail::Reader r;
    DomainOntology od;
    for (std::size_t i = 0; i < concepts.size(); ++i) {
      const std::string ptr = detail::child("/concepts", i);
      if (concepts[i].id.empty()) r.fail(ptr, "concept id is empty");
      if (!od.index_.emplace(concepts[i].id, i).second) {
        r.fail(ptr, "duplicate concept id \"" + concepts[i].id + "\"");
      }
    }
    for (std::size_t i = 0; i < concepts.size(); ++i) {
      const auto& parent = concepts[i].parent;
      if (parent && od.index_.count(*parent) == 0) {
        r.fail(detail::child(detail::child("/concepts", i), "parent"),
               "unknown parent \"" + *parent + "\"");
      }
    }
    r.throw_if_failed(ErrorKind::reference);

    for (std::size_t i = 0; i < concepts.size(); ++i) {
      // Walk up; a path longer than the concept count means a cycle.
      std::size_t steps = 0;
      std::optional<ConceptId> cur = concepts[i].parent;
      while (cur && steps <= concepts.size()) {
        cur = concepts[od.index_.at(*cur)].parent;
        ++steps;
      }
      if (cur) {
        r.fail(detail::child(detail::child("/concepts", i), "parent"),
               "taxonomy cycle through \"" + concepts[i].id + "\"");
      }
    }
    r.throw_if_failed(ErrorKind::reference);

    od.terms_.resize(concepts.size());
    for (std::size_t e = 0; e < thesaurus.size(); ++e) {
      const std::string ptr = detail::child("/thesaurus", e);
      auto it = od.index_.find(thesaurus[e].concept_id);
      if (it == od.index_.end()) {
        r.fail(detail::child(ptr, "concept"),
               "unknown concept \"" + thesaurus[e].concept_id + "\"");
        continue;
      }
      auto& bucket = od.terms_[it->second];
      std::set<Term> local;
      for (std::size_t k = 0; k < thesaurus[e].terms.size(); ++k) {
        const Term t = normalize_term(thesaurus[e].terms[k]);
        if (t.empty()) {
          r.fail(detail::child(detail::child(ptr, "terms"), k), "empty term");
          continue;
        }
        if (!local.insert(t).second) {
          r.fail(detail::child(detail::child(ptr, "terms"), k),
                 "duplicate term \"" + t + "\" in entry");
          continue;
        }
        if (std::find(bucket.begin(), bucket.end(), t) == bucket.end()) bucket.push_back(t);
      }
    }
    r.throw_if_failed(ErrorKind::validation);

    for (std::size_t i = 0; i < concepts.size(); ++i) {
      const Term label = normalize_term(concepts[i].label);
      auto& bucket = od.terms_[i];
      if (!label.empty() && std::find(bucket.begin(), bucket.end(), label) == bucket.end()) {
        bucket.insert(bucket.begin(), label);
      }
      for (const auto& t : bucket) od.by_term_[t].push_back(i);
    }
    od.concepts_ = std::move(concepts);
    return od;
  }

  const std::vector<DomainConcept>& concepts() const { return concepts_; }
  bool contains(const ConceptId& id) const { return index_.count(id) != 0; }

  const DomainConcept& concept_of(const ConceptId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error(ErrorKind::reference, "", "unknown concept \"" + id + "\"");
    return concepts_[it->second];
  }

  // Normalized terms of the concept's thesaurus entry, label first.
  const std::vector<Term>& terms_of(const ConceptId& id) const {
    concept_of(id);
    return terms_[index_.at(id)];
  }

  std::vector<ThesaurusEntry> thesaurus() const {
    std::vector<ThesaurusEntry> out;
    for (std::size_t i = 0; i < concepts_.size(); ++i) out.push_back({concepts_[i].id, terms_[i]});
    return out;
  }

  // `t` must already be normalized.
  AnchorResult anchor(const Term& t) const {
    auto it = by_term_.find(t);
    if (it == by_term_.end() || it->second.empty()) return AnchorNone{};
    if (it->second.size() == 1) return AnchorUnique{concepts_[it->second.front()].id};
    AnchorAmbiguous amb;
    for (std::size_t i : it->second) amb.ids.push_back(concepts_[i].id);
    return amb;
  }

  ConceptRelation relation(const ConceptId& a, const ConceptId& b) const {
    const auto& ta = terms_of(a);
    const auto& tb = terms_of(b);
    if (a == b) return ConceptRelation::same;
    for (const auto& t : ta) {
      if (std::find(tb.begin(), tb.end(), t) != tb.end()) return ConceptRelation::homonym_shared_term;
    }
    return ConceptRelation::unrelated;
  }

 private:
  std::vector<DomainConcept> concepts_;
  std::vector<std::vector<Term>> terms_;
  std::unordered_map<ConceptId, std::size_t> index_;
  std::unordered_map<Term, std::vector<std::size_t>> by_term_;
};

inline AnchorResult anchor(const Term& t, const DomainOntology& od) { return od.anchor(t); }

inline ConceptRelation relation(const ConceptId& a, const ConceptId& b, const DomainOntology& od) {
  return od.relation(a, b);
}

inline std::optional<ConceptId> unique_anchor(const AnchorResult& r) {
  if (const auto* u = std::get_if<AnchorUnique>(&r)) return u->id;
  return std::nullopt;
}

inline DomainOntology load_domain_ontology(std::string_view document) {
  using detail::child;
  const detail::json doc = detail::parse_json(document);
  detail::Reader r;
  if (!r.object(doc, "", {"concepts", "thesaurus"}, {"concepts"})) {
    r.throw_if_failed(ErrorKind::syntax);
  }
  std::vector<DomainConcept> concepts;
  if (const auto* jcs = r.array(doc, "concepts", "")) {
    for (std::size_t i = 0; i < jcs->size(); ++i) {
      const auto& jc = (*jcs)[i];
      const std::string ptr = child("/concepts", i);
      if (!r.object(jc, ptr, {"id", "label", "parent", "definitions"}, {"id", "label"})) continue;
      DomainConcept c;
      c.id = r.string(jc, "id", ptr).value_or("");
      c.label = r.string(jc, "label", ptr).value_or("");
      c.parent = r.string(jc, "parent", ptr);
      c.definitions = r.strings(jc, "definitions", ptr);
      concepts.push_back(std::move(c));
    }
  }
  std::vector<ThesaurusEntry> entries;
  if (const auto* jts = r.array(doc, "thesaurus", "")) {
    for (std::size_t i = 0; i < jts->size(); ++i) {
      const auto& je = (*jts)[i];
      const std::string ptr = child("/thesaurus", i);
      if (!r.object(je, ptr, {"concept", "terms"}, {"concept", "terms"})) continue;
      entries.push_back({r.string(je, "concept", ptr).value_or(""), r.strings(je, "terms", ptr)});
    }
  }
  r.throw_if_failed(ErrorKind::syntax);
  return DomainOntology::from_parts(std::move(concepts), std::move(entries));
}

}  // namespace cmfuse
