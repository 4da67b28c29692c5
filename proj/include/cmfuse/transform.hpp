#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cmfuse/error.hpp"
#include "cmfuse/json_util.hpp"
#include "cmfuse/model.hpp"
#include "cmfuse/ontology.hpp"
#include "cmfuse/term.hpp"

namespace cmfuse {

using Diagnostics = std::vector<std::string>;

enum class ConceptKind { component, attribute, operation };

inline std::string_view to_string(ConceptKind k) {
  switch (k) {
    case ConceptKind::component: return "component";
    case ConceptKind::attribute: return "attribute";
    case ConceptKind::operation: return "operation";
  }
  return "attribute";
}

inline std::optional<ConceptKind> parse_concept_kind(std::string_view s) {
  if (s == "component") return ConceptKind::component;
  if (s == "attribute") return ConceptKind::attribute;
  if (s == "operation") return ConceptKind::operation;
  return std::nullopt;
}

// A node of a component ontology: designating term, definitions and
// members. A concept with no members is atomic.
struct Concept {
  Term term;
  std::string raw_label;
  std::vector<std::string> definitions;
  ConceptKind kind_tag = ConceptKind::attribute;
  std::vector<Concept> members;
  std::optional<ConceptId> anchor;
  bool pinned = false;  // anchor came from an explicit hint
  // Attribute metadata, carried through but never compared.
  std::optional<std::string> datatype;
  std::optional<std::string> unit;

  bool atomic() const { return members.empty(); }

  friend bool operator==(const Concept&, const Concept&) = default;
};

// Component-level data that does not take part in matching but is needed to
// emit a component back.
struct ComponentMetadata {
  std::optional<Kind> kind;
  std::optional<std::string> doc;
  std::vector<std::string> provides;
  std::vector<std::string> requires_;

  friend bool operator==(const ComponentMetadata&, const ComponentMetadata&) = default;
};

struct ComponentOntology {
  Concept root;
  std::string source;
  std::string origin;
  ComponentMetadata meta;

  friend bool operator==(const ComponentOntology&, const ComponentOntology&) = default;
};

namespace detail {

inline std::string strip_raw_marker(std::string raw) {
  while (!raw.empty() && (raw.back() == ' ' || raw.back() == '\t')) raw.pop_back();
  if (raw.ends_with("()")) {
    raw.resize(raw.size() - 2);
    while (!raw.empty() && (raw.back() == ' ' || raw.back() == '\t')) raw.pop_back();
  }
  return raw;
}

class Anchorer {
 public:
  Anchorer(const BusinessComponent& cm, const DomainOntology& od, Diagnostics* diags)
      : cm_(cm), od_(od), diags_(diags) {
    for (const auto& [key, id] : cm.anchors) hints_[normalize_term(key)] = id;
  }

  void resolve(Concept& c) const {
    const auto hint = find_hint(c);
    AnchorResult found = od_.anchor(c.term);
    if (c.kind_tag == ConceptKind::operation && std::holds_alternative<AnchorNone>(found)) {
      found = od_.anchor(strip_operation_marker(c.term));
    }
    if (hint) {
      if (od_.contains(*hint)) {
        c.anchor = *hint;
        c.pinned = true;
        return;
      }
      note("anchor hint \"" + *hint + "\" for \"" + c.term + "\" names no domain concept; ignored");
    }
    if (auto id = unique_anchor(found)) {
      c.anchor = *id;
    } else if (const auto* amb = std::get_if<AnchorAmbiguous>(&found)) {
      std::string ids;
      for (const auto& id : amb->ids) ids += (ids.empty() ? "" : ", ") + id;
      note("term \"" + c.term + "\" is ambiguous (" + ids +
           "); no anchor hint, comparing syntactically");
    }
  }

 private:
  std::optional<ConceptId> find_hint(const Concept& c) const {
    if (auto it = hints_.find(c.term); it != hints_.end()) return it->second;
    if (c.kind_tag == ConceptKind::operation) {
      if (auto it = hints_.find(strip_operation_marker(c.term)); it != hints_.end()) {
        return it->second;
      }
    }
    return std::nullopt;
  }

  void note(std::string msg) const {
    if (diags_) diags_->push_back(cm_.source + "." + cm_.name + ": " + msg);
  }

  const BusinessComponent& cm_;
  const DomainOntology& od_;
  Diagnostics* diags_;
  std::map<Term, ConceptId> hints_;
};

}  // namespace detail

// Two-level mapping: the component becomes the root concept, each attribute
// and operation an atomic member (attributes first, declaration order).
// Ambiguous anchors are reported through `diags`, never thrown.
inline ComponentOntology to_ontology(const BusinessComponent& cm, const DomainOntology& od,
                                     Diagnostics* diags = nullptr) {
  const detail::Anchorer anchorer(cm, od, diags);
  auto definitions_of = [&](const Concept& c) {
    return c.anchor ? od.concept_of(*c.anchor).definitions : std::vector<std::string>{};
  };

  ComponentOntology ocm;
  ocm.source = cm.source;
  ocm.origin = cm.name;
  ocm.meta = {cm.kind, cm.doc, cm.provides, cm.requires_};

  Concept& root = ocm.root;
  root.term = normalize_term(cm.name);
  root.raw_label = cm.name;
  root.kind_tag = ConceptKind::component;
  anchorer.resolve(root);
  if (cm.doc) root.definitions.push_back(*cm.doc);
  for (auto& d : definitions_of(root)) root.definitions.push_back(std::move(d));

  for (const auto& a : cm.attributes) {
    Concept m;
    m.term = normalize_term(a.name);
    m.raw_label = a.name;
    m.kind_tag = ConceptKind::attribute;
    m.datatype = a.datatype;
    m.unit = a.unit;
    anchorer.resolve(m);
    m.definitions = definitions_of(m);
    root.members.push_back(std::move(m));
  }
  for (const auto& o : cm.operations) {
    Concept m;
    m.term = with_operation_marker(normalize_term(o.name));
    m.raw_label = o.name;
    m.kind_tag = ConceptKind::operation;
    anchorer.resolve(m);
    m.definitions = definitions_of(m);
    root.members.push_back(std::move(m));
  }
  return ocm;
}

// Inverse emission. Nested composites are flattened to their own term.
inline BusinessComponent to_component(const ComponentOntology& ocm) {
  BusinessComponent c;
  c.name = ocm.root.raw_label.empty() ? ocm.root.term : ocm.root.raw_label;
  c.kind = ocm.meta.kind.value_or(Kind::entity);
  c.doc = ocm.meta.doc;
  c.provides = ocm.meta.provides;
  c.requires_ = ocm.meta.requires_;
  c.source = ocm.source;
  if (ocm.root.pinned && ocm.root.anchor) c.anchors[c.name] = *ocm.root.anchor;
  for (const auto& m : ocm.root.members) {
    const std::string label = m.raw_label.empty() ? m.term : m.raw_label;
    if (m.kind_tag == ConceptKind::operation) {
      std::string name = detail::strip_raw_marker(label);
      if (name.empty()) name = strip_operation_marker(m.term);
      if (m.pinned && m.anchor) c.anchors[name + "()"] = *m.anchor;
      c.operations.push_back({std::move(name), std::nullopt, std::nullopt});
    } else {
      if (m.pinned && m.anchor) c.anchors[label] = *m.anchor;
      c.attributes.push_back({label, m.datatype, m.unit});
    }
  }
  return c;
}

// ---- OCM file -------------------------------------------------------------

inline detail::ordered_json to_json(const Concept& c) {
  detail::ordered_json j;
  j["term"] = c.term;
  j["raw_label"] = c.raw_label;
  j["kind"] = std::string(to_string(c.kind_tag));
  if (c.anchor) j["anchor"] = *c.anchor;
  if (c.pinned) j["pinned"] = true;
  if (!c.definitions.empty()) j["definitions"] = c.definitions;
  if (c.datatype) j["datatype"] = *c.datatype;
  if (c.unit) j["unit"] = *c.unit;
  j["members"] = detail::ordered_json::array();
  for (const auto& m : c.members) j["members"].push_back(to_json(m));
  return j;
}

inline detail::ordered_json to_json(const ComponentOntology& ocm) {
  detail::ordered_json j;
  j["source"] = ocm.source;
  j["origin"] = ocm.origin;
  if (ocm.meta.kind) j["component_kind"] = std::string(to_string(*ocm.meta.kind));
  if (ocm.meta.doc) j["doc"] = *ocm.meta.doc;
  if (!ocm.meta.provides.empty()) j["provides"] = ocm.meta.provides;
  if (!ocm.meta.requires_.empty()) j["requires"] = ocm.meta.requires_;
  j["root"] = to_json(ocm.root);
  return j;
}

inline std::string serialize_ocm(const ComponentOntology& ocm) { return detail::dump(to_json(ocm)); }

namespace detail {

inline Concept concept_from_json(const json& j, const std::string& ptr, Reader& r, bool is_root) {
  Concept c;
  if (!r.object(j, ptr,
                {"term", "raw_label", "kind", "anchor", "pinned", "definitions", "datatype", "unit", "members"},
                {"term", "kind"})) {
    return c;
  }
  c.term = r.string(j, "term", ptr).value_or("");
  c.raw_label = r.string(j, "raw_label", ptr).value_or("");
  if (auto k = r.string(j, "kind", ptr)) {
    if (auto parsed = parse_concept_kind(*k)) c.kind_tag = *parsed;
    else r.fail(child(ptr, "kind"), "unknown concept kind \"" + *k + "\"");
  }
  c.anchor = r.string(j, "anchor", ptr);
  if (auto it = j.find("pinned"); it != j.end()) {
    if (it->is_boolean()) c.pinned = it->get<bool>();
    else r.fail(child(ptr, "pinned"), "expected a boolean");
  }
  c.definitions = r.strings(j, "definitions", ptr);
  c.datatype = r.string(j, "datatype", ptr);
  c.unit = r.string(j, "unit", ptr);
  if (c.term.empty() || normalize_term(c.term) != c.term) {
    r.fail(child(ptr, "term"), "term is empty or not normalized");
  }
  if (is_root != (c.kind_tag == ConceptKind::component)) {
    r.fail(child(ptr, "kind"), is_root ? "root concept must have kind \"component\""
                                       : "kind \"component\" is only allowed at the root");
  }
  if (const auto* ms = r.array(j, "members", ptr)) {
    std::set<std::pair<ConceptKind, Term>> seen;
    for (std::size_t i = 0; i < ms->size(); ++i) {
      const std::string mp = child(child(ptr, "members"), i);
      Concept m = concept_from_json((*ms)[i], mp, r, false);
      if (!m.term.empty() && !seen.emplace(m.kind_tag, m.term).second) {
        r.fail(mp, "duplicate member term \"" + m.term + "\"");
      }
      c.members.push_back(std::move(m));
    }
  }
  return c;
}

}  // namespace detail

inline ComponentOntology ocm_from_json(const detail::json& doc, const std::string& ptr = "") {
  detail::Reader r;
  ComponentOntology ocm;
  if (r.object(doc, ptr,
               {"source", "origin", "component_kind", "doc", "provides", "requires", "root"},
               {"source", "origin", "root"})) {
    ocm.source = r.string(doc, "source", ptr).value_or("");
    ocm.origin = r.string(doc, "origin", ptr).value_or("");
    if (auto k = r.string(doc, "component_kind", ptr)) {
      if (auto parsed = parse_kind(*k)) ocm.meta.kind = *parsed;
      else r.fail(detail::child(ptr, "component_kind"), "unknown kind \"" + *k + "\"");
    }
    ocm.meta.doc = r.string(doc, "doc", ptr);
    ocm.meta.provides = r.strings(doc, "provides", ptr);
    ocm.meta.requires_ = r.strings(doc, "requires", ptr);
    ocm.root = detail::concept_from_json(doc["root"], detail::child(ptr, "root"), r, true);
  }
  r.throw_if_failed(ErrorKind::syntax);
  return ocm;
}

inline ComponentOntology parse_ocm(std::string_view document) {
  return ocm_from_json(detail::parse_json(document));
}

}  // namespace cmfuse
