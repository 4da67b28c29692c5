#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmfuse/error.hpp"
#include "cmfuse/json_util.hpp"
#include "cmfuse/term.hpp"

namespace cmfuse {

// Business-component categories, in the order used for layering.
enum class Kind { data, utility, entity, process };

inline std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::entity: return "entity";
    case Kind::process: return "process";
    case Kind::utility: return "utility";
    case Kind::data: return "data";
  }
  return "entity";
}

inline std::optional<Kind> parse_kind(std::string_view s) {
  if (s == "entity") return Kind::entity;
  if (s == "process") return Kind::process;
  if (s == "utility") return Kind::utility;
  if (s == "data") return Kind::data;
  return std::nullopt;
}

// process > entity > utility > data
inline int layer_of(Kind k) { return static_cast<int>(k); }

struct Attribute {
  std::string name;
  std::optional<std::string> datatype;  // inert metadata
  std::optional<std::string> unit;      // inert metadata

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct Operation {
  std::string name;
  std::optional<std::vector<std::string>> params;
  std::optional<std::string> returns;

  friend bool operator==(const Operation&, const Operation&) = default;
};

struct BusinessComponent {
  std::string name;
  Kind kind = Kind::entity;
  std::optional<std::string> doc;
  std::vector<Attribute> attributes;
  std::vector<Operation> operations;
  std::vector<std::string> provides;
  std::vector<std::string> requires_;
  std::string source;
  // raw member term -> domain concept id
  std::map<std::string, std::string> anchors;

  friend bool operator==(const BusinessComponent&, const BusinessComponent&) = default;
};

struct ComponentSet {
  std::string system;
  std::vector<BusinessComponent> components;

  friend bool operator==(const ComponentSet&, const ComponentSet&) = default;
};

namespace detail {

inline void check_component(const BusinessComponent& c, const std::string& ptr,
                            Reader& r) {
  if (normalize_term(c.name).empty()) r.fail(child(ptr, "name"), "component name is empty");

  std::map<Term, std::string> attr_terms;
  for (std::size_t i = 0; i < c.attributes.size(); ++i) {
    const std::string here = child(child(ptr, "attributes"), i);
    const Term t = normalize_term(c.attributes[i].name);
    if (t.empty()) {
      r.fail(here, "attribute name is empty");
      continue;
    }
    if (!attr_terms.emplace(t, here).second) {
      r.fail(here, "duplicate attribute term \"" + t + "\"");
    }
  }

  std::set<Term> op_stems;
  for (std::size_t i = 0; i < c.operations.size(); ++i) {
    const std::string here = child(child(ptr, "operations"), i);
    const Term stem = strip_operation_marker(normalize_term(c.operations[i].name));
    if (stem.empty()) {
      r.fail(here, "operation name is empty");
      continue;
    }
    if (!op_stems.insert(stem).second) {
      r.fail(here, "duplicate operation term \"" + stem + "()\"");
    }
    if (attr_terms.count(stem) != 0) {
      r.fail(here, "operation \"" + stem + "()\" shares its term with an attribute");
    }
  }

  const Term name_term = normalize_term(c.name);
  for (const auto& [key, id] : c.anchors) {
    const std::string here = child(child(ptr, "anchors"), key);
    const Term t = normalize_term(key);
    const bool known = t == name_term || attr_terms.count(t) != 0 ||
                       op_stems.count(strip_operation_marker(t)) != 0;
    if (!known) r.fail(here, "anchor key \"" + key + "\" names no member of the component");
    if (id.empty()) r.fail(here, "anchor concept id is empty");
  }
}

inline void check_unique_names(const std::vector<BusinessComponent>& comps, Reader& r) {
  std::set<std::pair<std::string, Term>> seen;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto key = std::make_pair(comps[i].source, normalize_term(comps[i].name));
    if (!seen.insert(key).second) {
      r.fail(child("/components", i), "duplicate component \"" + comps[i].name +
                                          "\" in system \"" + comps[i].source + "\"");
    }
  }
}

}  // namespace detail

// Throws Error(validation) listing every violated invariant.
inline void validate(const ComponentSet& set) {
  detail::Reader r;
  for (std::size_t i = 0; i < set.components.size(); ++i) {
    detail::check_component(set.components[i], detail::child("/components", i), r);
  }
  detail::check_unique_names(set.components, r);
  r.throw_if_failed(ErrorKind::validation);
}

inline ComponentSet parse_component_set(std::string_view document) {
  using detail::child;
  const detail::json doc = detail::parse_json(document);
  detail::Reader r;
  ComponentSet set;

  if (!r.object(doc, "", {"system", "components"}, {"system", "components"})) {
    r.throw_if_failed(ErrorKind::syntax);
  }
  set.system = r.string(doc, "system", "").value_or("");
  if (set.system.empty() && doc["system"].is_string()) r.fail("/system", "system is empty");

  const detail::json* comps = r.array(doc, "components", "");
  for (std::size_t i = 0; comps && i < comps->size(); ++i) {
    const detail::json& jc = (*comps)[i];
    const std::string ptr = child("/components", i);
    if (!r.object(jc, ptr,
                  {"name", "kind", "doc", "attributes", "operations", "provides",
                   "requires", "anchors"},
                  {"name", "kind", "attributes", "operations"})) {
      continue;
    }
    BusinessComponent c;
    c.source = set.system;
    c.name = r.string(jc, "name", ptr).value_or("");
    if (auto kind = r.string(jc, "kind", ptr)) {
      if (auto k = parse_kind(*kind)) {
        c.kind = *k;
      } else {
        r.fail(child(ptr, "kind"), "unknown kind \"" + *kind + "\"");
      }
    }
    c.doc = r.string(jc, "doc", ptr);

    if (const auto* attrs = r.array(jc, "attributes", ptr)) {
      for (std::size_t k = 0; k < attrs->size(); ++k) {
        const auto& ja = (*attrs)[k];
        const std::string ap = child(child(ptr, "attributes"), k);
        if (!r.object(ja, ap, {"name", "datatype", "unit"}, {"name"})) continue;
        c.attributes.push_back({r.string(ja, "name", ap).value_or(""),
                                r.string(ja, "datatype", ap), r.string(ja, "unit", ap)});
      }
    }
    if (const auto* ops = r.array(jc, "operations", ptr)) {
      for (std::size_t k = 0; k < ops->size(); ++k) {
        const auto& jo = (*ops)[k];
        const std::string op = child(child(ptr, "operations"), k);
        if (!r.object(jo, op, {"name", "params", "returns"}, {"name"})) continue;
        Operation o;
        o.name = r.string(jo, "name", op).value_or("");
        if (jo.contains("params")) o.params = r.strings(jo, "params", op);
        o.returns = r.string(jo, "returns", op);
        c.operations.push_back(std::move(o));
      }
    }
    c.provides = r.strings(jc, "provides", ptr);
    c.requires_ = r.strings(jc, "requires", ptr);
    if (auto it = jc.find("anchors"); it != jc.end()) {
      if (!it->is_object()) {
        r.fail(child(ptr, "anchors"), "expected an object of strings");
      } else {
        for (const auto& [key, value] : it->items()) {
          if (!value.is_string()) {
            r.fail(child(child(ptr, "anchors"), key), "expected a string");
            continue;
          }
          c.anchors.emplace(key, value.get<std::string>());
        }
      }
    }
    set.components.push_back(std::move(c));
  }
  const bool shape_ok = r.ok();
  for (std::size_t i = 0; i < set.components.size(); ++i) {
    detail::check_component(set.components[i], child("/components", i), r);
  }
  detail::check_unique_names(set.components, r);
  r.throw_if_failed(shape_ok ? ErrorKind::validation : ErrorKind::syntax);
  return set;
}

inline detail::ordered_json to_json(const BusinessComponent& c) {
  detail::ordered_json j;
  j["name"] = c.name;
  j["kind"] = std::string(to_string(c.kind));
  if (c.doc) j["doc"] = *c.doc;
  j["attributes"] = detail::ordered_json::array();
  for (const auto& a : c.attributes) {
    detail::ordered_json ja;
    ja["name"] = a.name;
    if (a.datatype) ja["datatype"] = *a.datatype;
    if (a.unit) ja["unit"] = *a.unit;
    j["attributes"].push_back(std::move(ja));
  }
  j["operations"] = detail::ordered_json::array();
  for (const auto& o : c.operations) {
    detail::ordered_json jo;
    jo["name"] = o.name;
    if (o.params) jo["params"] = *o.params;
    if (o.returns) jo["returns"] = *o.returns;
    j["operations"].push_back(std::move(jo));
  }
  if (!c.provides.empty()) j["provides"] = c.provides;
  if (!c.requires_.empty()) j["requires"] = c.requires_;
  if (!c.anchors.empty()) {
    detail::ordered_json ja = detail::ordered_json::object();
    for (const auto& [k, v] : c.anchors) ja[k] = v;
    j["anchors"] = std::move(ja);
  }
  return j;
}

// Canonical serialization. The file format has no per-component source, so
// every component is written under the set's system label.
inline std::string serialize_component_set(const ComponentSet& set) {
  detail::ordered_json j;
  j["system"] = set.system;
  j["components"] = detail::ordered_json::array();
  for (const auto& c : set.components) j["components"].push_back(to_json(c));
  return detail::dump(j);
}

// Concatenation; components keep their source labels.
inline ComponentSet union_of(const ComponentSet& a, const ComponentSet& b) {
  ComponentSet out;
  if (a.system.empty()) out.system = b.system;
  else if (b.system.empty()) out.system = a.system;
  else out.system = a.system + "+" + b.system;
  out.components = a.components;
  out.components.insert(out.components.end(), b.components.begin(), b.components.end());

  detail::Reader r;
  detail::check_unique_names(out.components, r);
  r.throw_if_failed(ErrorKind::validation);
  return out;
}

struct LayeringDiagnostic {
  std::string requirer_source;
  std::string requirer;
  std::string interface_name;
  std::string provider_source;
  std::string provider;
  std::string message;
};

// Warns for each `requires` edge going from a lower layer to a higher one
// (process > entity > utility > data). Interfaces match by normalized name
// within one source system.
inline std::vector<LayeringDiagnostic> check_layering(const ComponentSet& set) {
  std::vector<LayeringDiagnostic> out;
  for (const auto& user : set.components) {
    for (const auto& needed : user.requires_) {
      const Term wanted = normalize_term(needed);
      for (const auto& provider : set.components) {
        if (&provider == &user || provider.source != user.source) continue;
        bool provides = false;
        for (const auto& p : provider.provides) provides = provides || normalize_term(p) == wanted;
        if (!provides || layer_of(user.kind) >= layer_of(provider.kind)) continue;
        out.push_back({user.source, user.name, needed, provider.source, provider.name,
                       std::string(to_string(user.kind)) + " component \"" + user.name +
                           "\" requires \"" + needed + "\" from higher-layer " +
                           std::string(to_string(provider.kind)) + " component \"" +
                           provider.name + "\""});
      }
    }
  }
  return out;
}

}  // namespace cmfuse
