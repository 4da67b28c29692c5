#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmfuse/error.hpp"
#include "cmfuse/json_util.hpp"
#include "cmfuse/model.hpp"
#include "cmfuse/ontology.hpp"
#include "cmfuse/score.hpp"
#include "cmfuse/simatch.hpp"
#include "cmfuse/transform.hpp"
#include "cmfuse/union_find.hpp"

namespace cmfuse {

enum class Classification { equivalent, synonym_pair, homonym_conflict, distinct };

inline std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::equivalent: return "equivalent";
    case Classification::synonym_pair: return "synonym_pair";
    case Classification::homonym_conflict: return "homonym_conflict";
    case Classification::distinct: return "distinct";
  }
  return "distinct";
}

inline std::optional<Classification> parse_classification(std::string_view s) {
  if (s == "equivalent") return Classification::equivalent;
  if (s == "synonym_pair") return Classification::synonym_pair;
  if (s == "homonym_conflict") return Classification::homonym_conflict;
  if (s == "distinct") return Classification::distinct;
  return std::nullopt;
}

inline Classification classify(bool names_equal, Verdict v) {
  if (v == Verdict::synonym) return names_equal ? Classification::equivalent : Classification::synonym_pair;
  return names_equal ? Classification::homonym_conflict : Classification::distinct;
}

// Points at a root concept (member empty) or one of its members.
struct ConceptRef {
  std::string source;
  std::string origin;
  std::optional<Term> member;

  std::string path() const {
    std::string p = source + "/" + origin;
    if (member) p += "/" + *member;
    return p;
  }

  friend bool operator==(const ConceptRef&, const ConceptRef&) = default;
};

struct Correspondence {
  ConceptRef left;
  ConceptRef right;
  Score score;
  Classification classification = Classification::distinct;

  bool root_level() const { return !left.member; }
  friend bool operator==(const Correspondence&, const Correspondence&) = default;
};

struct Alignment {
  // One root-level entry per cross-source root pair, each followed by the
  // member-level entries of its score-1 cells.
  std::vector<Correspondence> correspondences;
  std::vector<Correspondence> conflicts;  // root-level homonym_conflict subset
  Diagnostics diagnostics;
  // Preferred labels (normalized) of every domain concept used as an anchor.
  std::map<ConceptId, Term> domain_labels;

  friend bool operator==(const Alignment&, const Alignment&) = default;
};

struct RepresentationOntology {
  std::vector<ComponentOntology> concepts;
  std::vector<std::pair<std::string, std::string>> equivalences;  // concept paths
};

struct MergedComponent {
  RepresentationOntology representation;
  ComponentSet result;
};

inline Alignment align(const std::vector<ComponentOntology>& set, const DomainOntology& od,
                       const SimOptions& opt = {}) {
  Alignment al;
  auto note_label = [&](const Concept& c) {
    if (auto id = detail::effective_anchor(c, od)) al.domain_labels[*id] = normalize_term(od.concept_of(*id).label);
  };
  for (const auto& ocm : set) {
    note_label(ocm.root);
    for (const auto& m : ocm.root.members) note_label(m);
  }

  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      const auto& a = set[i];
      const auto& b = set[j];
      if (a.source == b.source) continue;
      const SimilarityMatrix mx = similarity_matrix(a, b, od, opt);
      Correspondence root{{a.source, a.origin, std::nullopt},
                          {b.source, b.origin, std::nullopt},
                          mx.aggregate,
                          classify(mx.apparent_names_equal(), mx.verdict)};
      al.correspondences.push_back(root);
      if (root.classification == Classification::homonym_conflict) al.conflicts.push_back(root);
      for (std::size_t r = 0; r < mx.cells.size(); ++r) {
        for (std::size_t c = 0; c < mx.cells[r].size(); ++c) {
          if (!mx.cells[r][c].is_one()) continue;
          const Term& lt = mx.left_members[r];
          const Term& rt = mx.right_members[c];
          al.correspondences.push_back({{a.source, a.origin, lt},
                                        {b.source, b.origin, rt},
                                        mx.cells[r][c],
                                        classify(lt == rt, Verdict::synonym)});
        }
      }
    }
  }
  return al;
}

// Root-level homonym conflicts plus synonym pairs that call for name
// unification, ordered by left (source, origin).
inline std::vector<Correspondence> detect_naming_conflicts(const Alignment& al) {
  std::vector<Correspondence> out;
  for (const auto& c : al.correspondences) {
    if (!c.root_level()) continue;
    if (c.classification == Classification::homonym_conflict ||
        c.classification == Classification::synonym_pair) {
      out.push_back(c);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Correspondence& x, const Correspondence& y) {
    return std::tie(x.left.source, x.left.origin) < std::tie(y.left.source, y.left.origin);
  });
  return out;
}

namespace detail {

struct MemberSlot {
  std::size_t root;    // index into the input set
  std::size_t member;  // index into that root's members
};

inline bool links_roots(const Correspondence& c) {
  return c.root_level() && (c.classification == Classification::equivalent ||
                            c.classification == Classification::synonym_pair);
}

}  // namespace detail

// Folds an alignment into one component per root equivalence class.
// Homonym-conflicting roots keep separate, source-qualified names. A class
// whose members disagree on the name takes the domain label; otherwise the
// shared name is kept.
inline MergedComponent merge(const Alignment& al, const std::vector<ComponentOntology>& set) {
  std::map<std::pair<std::string, std::string>, std::size_t> root_index;
  for (std::size_t i = 0; i < set.size(); ++i) root_index.emplace(std::make_pair(set[i].source, set[i].origin), i);

  detail::Reader r;
  auto resolve = [&](const ConceptRef& ref, const std::string& where) -> std::optional<detail::MemberSlot> {
    auto it = root_index.find({ref.source, ref.origin});
    if (it == root_index.end()) {
      r.fail(where, "alignment references unknown root \"" + ref.path() + "\"");
      return std::nullopt;
    }
    if (!ref.member) return detail::MemberSlot{it->second, 0};
    const auto& members = set[it->second].root.members;
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (members[k].term == *ref.member) return detail::MemberSlot{it->second, k};
    }
    r.fail(where, "alignment references unknown member \"" + ref.path() + "\"");
    return std::nullopt;
  };

  UnionFind roots(set.size());
  std::vector<char> in_conflict(set.size(), 0);
  struct MemberEdge {
    detail::MemberSlot left, right;
    const Correspondence* corr;
  };
  std::vector<MemberEdge> member_edges;
  std::vector<const Correspondence*> root_edges;

  for (std::size_t k = 0; k < al.correspondences.size(); ++k) {
    const auto& c = al.correspondences[k];
    const std::string where = detail::child("/correspondences", k);
    const auto l = resolve(c.left, where);
    const auto rr = resolve(c.right, where);
    if (!l || !rr) continue;
    if (c.root_level()) {
      if (detail::links_roots(c)) {
        roots.unite(l->root, rr->root);
        root_edges.push_back(&c);
      } else if (c.classification == Classification::homonym_conflict) {
        in_conflict[l->root] = in_conflict[rr->root] = 1;
      }
    } else if (c.score.is_one()) {
      member_edges.push_back({*l, *rr, &c});
    }
  }
  r.throw_if_failed(ErrorKind::reference);

  auto label_of = [&](const Concept& c) -> std::optional<Term> {
    if (!c.anchor) return std::nullopt;
    auto it = al.domain_labels.find(*c.anchor);
    if (it == al.domain_labels.end() || it->second.empty()) return std::nullopt;
    return it->second;
  };

  MergedComponent out;
  std::vector<std::string> systems;
  for (const auto& ocm : set) {
    if (std::find(systems.begin(), systems.end(), ocm.source) == systems.end()) systems.push_back(ocm.source);
  }
  for (const auto& s : systems) out.result.system += (out.result.system.empty() ? "" : "+") + s;

  // Operation term -> canonical operation term, for interface rewriting.
  std::map<Term, Term> op_rename;
  // (source, root term) -> qualified name, for interface rewriting.
  std::map<std::pair<std::string, Term>, std::string> qualified_roots;
  std::set<Term> used_names;

  for (const auto& cls : roots.classes()) {
    const bool qualified = std::any_of(cls.begin(), cls.end(), [&](std::size_t i) { return in_conflict[i] != 0; });

    // Root name.
    std::optional<Term> canonical;
    std::set<Term> root_terms;
    for (std::size_t i : cls) root_terms.insert(set[i].root.term);
    std::optional<ConceptId> root_anchor =
        root_terms.size() == 1 ? set[cls.front()].root.anchor : std::nullopt;
    for (std::size_t i : cls) {
      if (root_terms.size() == 1) break;
      if (auto lbl = label_of(set[i].root)) {
        canonical = lbl;
        root_anchor = set[i].root.anchor;
        break;
      }
    }
    if (!canonical) {
      for (std::size_t i : cls) {
        if (!canonical || set[i].root.term < *canonical) canonical = set[i].root.term;
      }
    }
    std::string display = *canonical;
    for (std::size_t i : cls) {
      if (set[i].root.term == *canonical) {
        display = set[i].root.raw_label.empty() ? set[i].root.term : set[i].root.raw_label;
        break;
      }
    }
    std::vector<std::string> class_sources;
    for (std::size_t i : cls) {
      if (std::find(class_sources.begin(), class_sources.end(), set[i].source) == class_sources.end()) {
        class_sources.push_back(set[i].source);
      }
    }
    std::string prefix;
    for (const auto& s : class_sources) prefix += (prefix.empty() ? "" : "+") + s;
    if (qualified) {
      display = prefix + "." + (cls.size() == 1 ? set[cls.front()].origin : display);
      for (std::size_t i : cls) qualified_roots[{set[i].source, set[i].root.term}] = display;
    } else if (used_names.count(normalize_term(display)) != 0) {
      display = prefix + "." + display;
    }
    used_names.insert(normalize_term(display));

    // Members: union-find over every member slot of the class.
    std::vector<detail::MemberSlot> slots;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> slot_of;
    for (std::size_t i : cls) {
      for (std::size_t k = 0; k < set[i].root.members.size(); ++k) {
        slot_of[{i, k}] = slots.size();
        slots.push_back({i, k});
      }
    }
    UnionFind members(slots.size());
    for (const auto& e : member_edges) {
      auto l = slot_of.find({e.left.root, e.left.member});
      auto rr = slot_of.find({e.right.root, e.right.member});
      if (l == slot_of.end() || rr == slot_of.end()) continue;
      members.unite(l->second, rr->second);
      out.representation.equivalences.emplace_back(e.corr->left.path(), e.corr->right.path());
    }

    ComponentOntology merged;
    const auto& first = set[cls.front()];
    merged.source = out.result.system;
    merged.origin = display;
    merged.meta.kind = first.meta.kind;
    for (std::size_t i : cls) {
      if (!merged.meta.doc && set[i].meta.doc) merged.meta.doc = set[i].meta.doc;
    }
    merged.root.kind_tag = ConceptKind::component;
    merged.root.raw_label = display;
    merged.root.term = normalize_term(display);
    if (!qualified) {
      merged.root.anchor = root_anchor;
      for (std::size_t i : cls) {
        if (set[i].root.pinned && set[i].root.anchor == root_anchor) merged.root.pinned = true;
      }
    }
    for (std::size_t i : cls) {
      for (const auto& d : set[i].root.definitions) {
        if (std::find(merged.root.definitions.begin(), merged.root.definitions.end(), d) ==
            merged.root.definitions.end()) {
          merged.root.definitions.push_back(d);
        }
      }
    }

    std::set<std::pair<ConceptKind, Term>> used_terms;
    for (const auto& mcls : members.classes()) {
      std::vector<const Concept*> group;
      for (std::size_t s : mcls) group.push_back(&set[slots[s].root].root.members[slots[s].member]);
      const Concept* lead = nullptr;
      std::optional<Term> mterm;
      std::set<Term> group_terms;
      for (const Concept* c : group) group_terms.insert(c->term);
      for (const Concept* c : group) {
        if (group_terms.size() == 1) break;
        if (auto lbl = label_of(*c)) {
          mterm = c->kind_tag == ConceptKind::operation ? with_operation_marker(*lbl) : *lbl;
          lead = c;
          break;
        }
      }
      if (!mterm) {
        for (const Concept* c : group) {
          if (!mterm || c->term < *mterm) {
            mterm = c->term;
            lead = c;
          }
        }
      }
      Concept m;
      m.kind_tag = lead->kind_tag;
      m.term = *mterm;
      m.raw_label = *mterm;
      for (const Concept* c : group) {
        if (c->term == *mterm) {
          m.raw_label = c->raw_label;
          break;
        }
      }
      m.anchor = lead->anchor;
      m.pinned = lead->pinned;
      m.definitions = lead->definitions;
      m.datatype = lead->datatype;
      m.unit = lead->unit;
      if (!used_terms.emplace(m.kind_tag, m.term).second) {
        // Two unrelated members landed on the same term: keep both, qualified.
        const auto& src = set[slots[mcls.front()].root].source;
        m.raw_label = src + "." + m.raw_label;
        m.term = normalize_term(m.raw_label);
        used_terms.emplace(m.kind_tag, m.term);
      }
      if (m.kind_tag == ConceptKind::operation && group.size() > 1) {
        for (const Concept* c : group) op_rename.emplace(c->term, m.term);
      }
      merged.root.members.push_back(std::move(m));
    }

    for (std::size_t i : cls) {
      auto add_all = [](std::vector<std::string>& into, const std::vector<std::string>& from) {
        for (const auto& name : from) {
          if (std::none_of(into.begin(), into.end(),
                           [&](const std::string& x) { return normalize_term(x) == normalize_term(name); })) {
            into.push_back(name);
          }
        }
      };
      add_all(merged.meta.provides, set[i].meta.provides);
      add_all(merged.meta.requires_, set[i].meta.requires_);
    }
    out.representation.concepts.push_back(std::move(merged));
  }

  for (const Correspondence* e : root_edges) {
    out.representation.equivalences.emplace_back(e->left.path(), e->right.path());
  }
  std::sort(out.representation.equivalences.begin(), out.representation.equivalences.end());

  // Rewrite interface names to canonical / qualified names.
  auto rewrite = [&](std::vector<std::string>& names, const std::string& source_hint) {
    std::vector<std::string> rewritten;
    for (const auto& name : names) {
      const Term t = normalize_term(name);
      std::string next = name;
      if (auto it = op_rename.find(t); it != op_rename.end()) next = it->second;
      else if (auto it2 = op_rename.find(with_operation_marker(t)); it2 != op_rename.end()) next = it2->second;
      else if (auto q = qualified_roots.find({source_hint, t}); q != qualified_roots.end()) next = q->second;
      if (std::none_of(rewritten.begin(), rewritten.end(),
                       [&](const std::string& x) { return normalize_term(x) == normalize_term(next); })) {
        rewritten.push_back(next);
      }
    }
    names = std::move(rewritten);
  };
  const auto classes = roots.classes();
  for (std::size_t k = 0; k < out.representation.concepts.size(); ++k) {
    auto& ocm = out.representation.concepts[k];
    const std::string& src = set[classes[k].front()].source;
    rewrite(ocm.meta.provides, src);
    rewrite(ocm.meta.requires_, src);
    out.result.components.push_back(to_component(ocm));
  }
  return out;
}

// ---- files -------------------------------------------------------------------

inline detail::ordered_json to_json(const ConceptRef& ref) {
  detail::ordered_json j;
  j["source"] = ref.source;
  j["origin"] = ref.origin;
  if (ref.member) j["member"] = *ref.member;
  return j;
}

inline detail::ordered_json to_json(const Correspondence& c) {
  detail::ordered_json j;
  j["left"] = to_json(c.left);
  j["right"] = to_json(c.right);
  j["score"] = c.score.str();
  j["class"] = std::string(to_string(c.classification));
  return j;
}

// Alignment file. The aligned ontologies and options are embedded so that a
// later `merge` needs nothing else.
inline std::string serialize_alignment(const Alignment& al, const std::vector<ComponentOntology>& set,
                                       const SimOptions& opt) {
  detail::ordered_json j;
  j["options"] = {{"mode", std::string(to_string(opt.mode))},
                  {"recursive_semantics", opt.recursive_semantics}};
  j["correspondences"] = detail::ordered_json::array();
  for (const auto& c : al.correspondences) j["correspondences"].push_back(to_json(c));
  j["conflicts"] = detail::ordered_json::array();
  for (const auto& c : al.conflicts) j["conflicts"].push_back(to_json(c));
  j["diagnostics"] = al.diagnostics;
  j["domain_labels"] = detail::ordered_json::object();
  for (const auto& [id, label] : al.domain_labels) j["domain_labels"][id] = label;
  j["ontologies"] = detail::ordered_json::array();
  for (const auto& ocm : set) j["ontologies"].push_back(to_json(ocm));
  return detail::dump(j);
}

struct AlignmentDocument {
  Alignment alignment;
  std::vector<ComponentOntology> ontologies;
  SimOptions options;
};

namespace detail {

inline ConceptRef ref_from_json(const json& j, const std::string& ptr, Reader& r) {
  ConceptRef ref;
  if (!r.object(j, ptr, {"source", "origin", "member"}, {"source", "origin"})) return ref;
  ref.source = r.string(j, "source", ptr).value_or("");
  ref.origin = r.string(j, "origin", ptr).value_or("");
  ref.member = r.string(j, "member", ptr);
  return ref;
}

inline Correspondence correspondence_from_json(const json& j, const std::string& ptr, Reader& r) {
  Correspondence c;
  if (!r.object(j, ptr, {"left", "right", "score", "class"}, {"left", "right", "score", "class"})) return c;
  c.left = ref_from_json(j["left"], child(ptr, "left"), r);
  c.right = ref_from_json(j["right"], child(ptr, "right"), r);
  if (auto s = r.string(j, "score", ptr)) {
    try {
      c.score = Score::parse(*s);
    } catch (const std::exception& e) {
      r.fail(child(ptr, "score"), e.what());
    }
  }
  if (auto k = r.string(j, "class", ptr)) {
    if (auto parsed = parse_classification(*k)) c.classification = *parsed;
    else r.fail(child(ptr, "class"), "unknown class \"" + *k + "\"");
  }
  return c;
}

}  // namespace detail

inline AlignmentDocument parse_alignment(std::string_view document) {
  using detail::child;
  const detail::json doc = detail::parse_json(document);
  detail::Reader r;
  AlignmentDocument out;
  if (!r.object(doc, "",
                {"options", "correspondences", "conflicts", "diagnostics", "domain_labels", "ontologies"},
                {"correspondences", "conflicts", "diagnostics"})) {
    r.throw_if_failed(ErrorKind::syntax);
  }
  if (auto it = doc.find("options"); it != doc.end()) {
    if (r.object(*it, "/options", {"mode", "recursive_semantics"}, {})) {
      if (auto m = r.string(*it, "mode", "/options")) {
        if (auto parsed = parse_mode(*m)) out.options.mode = *parsed;
        else r.fail("/options/mode", "unknown mode \"" + *m + "\"");
      }
      if (auto rs = it->find("recursive_semantics"); rs != it->end()) {
        if (rs->is_boolean()) out.options.recursive_semantics = rs->get<bool>();
        else r.fail("/options/recursive_semantics", "expected a boolean");
      }
    }
  }
  if (const auto* cs = r.array(doc, "correspondences", "")) {
    for (std::size_t i = 0; i < cs->size(); ++i) {
      out.alignment.correspondences.push_back(
          detail::correspondence_from_json((*cs)[i], child("/correspondences", i), r));
    }
  }
  if (const auto* cs = r.array(doc, "conflicts", "")) {
    for (std::size_t i = 0; i < cs->size(); ++i) {
      out.alignment.conflicts.push_back(detail::correspondence_from_json((*cs)[i], child("/conflicts", i), r));
    }
  }
  out.alignment.diagnostics = r.strings(doc, "diagnostics", "");
  if (auto it = doc.find("domain_labels"); it != doc.end()) {
    if (!it->is_object()) {
      r.fail("/domain_labels", "expected an object");
    } else {
      for (const auto& [id, label] : it->items()) {
        if (label.is_string()) out.alignment.domain_labels[id] = label.get<std::string>();
        else r.fail(child("/domain_labels", id), "expected a string");
      }
    }
  }
  r.throw_if_failed(ErrorKind::syntax);
  if (const auto* os = r.array(doc, "ontologies", "")) {
    for (std::size_t i = 0; i < os->size(); ++i) out.ontologies.push_back(ocm_from_json((*os)[i], child("/ontologies", i)));
  }
  r.throw_if_failed(ErrorKind::syntax);
  return out;
}

inline std::string serialize_representation(const RepresentationOntology& rep) {
  detail::ordered_json j;
  j["concepts"] = detail::ordered_json::array();
  for (const auto& ocm : rep.concepts) j["concepts"].push_back(to_json(ocm));
  j["equivalences"] = detail::ordered_json::array();
  for (const auto& [a, b] : rep.equivalences) j["equivalences"].push_back({a, b});
  return detail::dump(j);
}

}  // namespace cmfuse
