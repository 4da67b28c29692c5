#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cmfuse/assignment.hpp"
#include "cmfuse/ontology.hpp"
#include "cmfuse/score.hpp"
#include "cmfuse/transform.hpp"

namespace cmfuse {

enum class AggregationMode { literal, bipartite };

inline std::string_view to_string(AggregationMode m) {
  return m == AggregationMode::literal ? "literal" : "bipartite";
}

inline std::optional<AggregationMode> parse_mode(std::string_view s) {
  if (s == "literal") return AggregationMode::literal;
  if (s == "bipartite") return AggregationMode::bipartite;
  return std::nullopt;
}

struct SimOptions {
  AggregationMode mode = AggregationMode::literal;
  // When false, composites not decided by anchoring fall straight back to
  // the syntactic measure instead of descending into their members.
  bool recursive_semantics = true;
};

namespace detail {

// An atomic concept stands in for a one-member composite.
inline std::span<const Concept> members_or_self(const Concept& c) {
  return c.atomic() ? std::span<const Concept>(&c, 1) : std::span<const Concept>(c.members);
}

template <class CellFn>
std::vector<std::vector<Score>> cell_grid(std::span<const Concept> left,
                                          std::span<const Concept> right, CellFn cell) {
  std::vector<std::vector<Score>> grid(left.size(), std::vector<Score>(right.size()));
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (std::size_t j = 0; j < right.size(); ++j) grid[i][j] = cell(left[i], right[j]);
  }
  return grid;
}

inline std::size_t max_arity(const std::vector<std::vector<Score>>& grid) {
  return std::max(grid.size(), grid.empty() ? std::size_t{0} : grid.front().size());
}

// Sum of all cells over the larger arity, saturated at 1.
inline Score literal_aggregate(const std::vector<std::vector<Score>>& grid) {
  const std::size_t n = max_arity(grid);
  if (n == 0) return Score::zero();
  Ratio sum;
  for (const auto& row : grid) {
    for (const auto& s : row) sum += s.value();
  }
  return Score::clamped(sum / n);
}

// Best one-to-one matching over the larger arity. Cells are scaled to a
// common denominator so the assignment runs on exact integers.
inline Score matching_aggregate(const std::vector<std::vector<Score>>& grid) {
  const std::size_t n = max_arity(grid);
  if (n == 0) return Score::zero();
  std::uint64_t common = 1;
  for (const auto& row : grid) {
    for (const auto& s : row) {
      const std::uint64_t g = std::gcd(common, s.den());
      if (common / g > UINT64_MAX / s.den()) throw std::overflow_error("matching denominator overflow");
      common = common / g * s.den();
    }
  }
  if (common > static_cast<std::uint64_t>(INT64_MAX / static_cast<std::int64_t>(n + 1))) {
    throw std::overflow_error("matching weight overflow");
  }
  std::vector<std::vector<std::int64_t>> weights(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (const auto& s : grid[i]) {
      weights[i].push_back(static_cast<std::int64_t>(s.num() * (common / s.den())));
    }
  }
  const std::int64_t best = max_weight_assignment(weights);
  return Score{Ratio{static_cast<std::uint64_t>(best), common} / n};
}

inline Score aggregate(const std::vector<std::vector<Score>>& grid, AggregationMode mode) {
  return mode == AggregationMode::literal ? literal_aggregate(grid) : matching_aggregate(grid);
}

// Anchor carried by the concept, else a unique thesaurus hit for its term.
inline std::optional<ConceptId> effective_anchor(const Concept& c, const DomainOntology& od) {
  if (c.anchor) {
    if (od.contains(*c.anchor)) return c.anchor;
    return std::nullopt;
  }
  if (auto id = unique_anchor(od.anchor(c.term))) return id;
  if (c.kind_tag == ConceptKind::operation && std::holds_alternative<AnchorNone>(od.anchor(c.term))) {
    return unique_anchor(od.anchor(strip_operation_marker(c.term)));
  }
  return std::nullopt;
}

}  // namespace detail

// Syntactic similarity. Atomic pairs score 1 on equal normalized terms of the
// same kind; composite pairs average the member-pair sum over the larger
// arity. Different kind tags always score 0.
inline Score sigma_prime(const Concept& c1, const Concept& c2) {
  if (c1.kind_tag != c2.kind_tag) return Score::zero();
  if (c1.atomic() && c2.atomic()) return Score::of(c1.term == c2.term);
  return detail::literal_aggregate(detail::cell_grid(
      detail::members_or_self(c1), detail::members_or_self(c2),
      [](const Concept& a, const Concept& b) { return sigma_prime(a, b); }));
}

// Semantic similarity:
//  (a) both anchored: same concept -> 1, homonyms -> 0, unrelated atomics -> 0;
//  (b) undecided composites -> member aggregate with sigma on every cell;
//  (c) otherwise the syntactic measure.
inline Score sigma(const Concept& c1, const Concept& c2, const DomainOntology& od,
                   const SimOptions& opt = {}) {
  if (c1.kind_tag != c2.kind_tag) return Score::zero();
  const auto a1 = detail::effective_anchor(c1, od);
  const auto a2 = detail::effective_anchor(c2, od);
  if (a1 && a2) {
    switch (od.relation(*a1, *a2)) {
      case ConceptRelation::same: return Score::one();
      case ConceptRelation::homonym_shared_term: return Score::zero();
      case ConceptRelation::unrelated:
        if (c1.atomic() && c2.atomic()) return Score::zero();
        break;
    }
  }
  if (!c1.atomic() && !c2.atomic() && opt.recursive_semantics) {
    return detail::aggregate(
        detail::cell_grid(c1.members, c2.members,
                          [&](const Concept& a, const Concept& b) { return sigma(a, b, od, opt); }),
        opt.mode);
  }
  return sigma_prime(c1, c2);
}

// Matching-based aggregate over the members of two concepts.
inline Score bipartite_score(const Concept& c1, const Concept& c2, const DomainOntology& od,
                             const SimOptions& opt = {}) {
  return detail::matching_aggregate(detail::cell_grid(
      detail::members_or_self(c1), detail::members_or_self(c2),
      [&](const Concept& a, const Concept& b) { return sigma(a, b, od, opt); }));
}

struct SimilarityMatrix {
  std::string left_source, left_origin;
  std::string right_source, right_origin;
  Term left_term, right_term;
  std::vector<Term> left_members;
  std::vector<Term> right_members;
  std::vector<std::vector<Score>> cells;
  Score aggregate;
  Verdict verdict = Verdict::not_synonym;
  AggregationMode mode = AggregationMode::literal;

  bool apparent_names_equal() const { return left_term == right_term; }
};

// Member-by-member table for two component ontologies. The designating names
// of the roots are not part of the table. Two member-less roots are compared
// as atomic concepts.
inline SimilarityMatrix similarity_matrix(const ComponentOntology& a, const ComponentOntology& b,
                                          const DomainOntology& od, const SimOptions& opt = {}) {
  SimilarityMatrix mx;
  mx.left_source = a.source;
  mx.left_origin = a.origin;
  mx.right_source = b.source;
  mx.right_origin = b.origin;
  mx.left_term = a.root.term;
  mx.right_term = b.root.term;
  mx.mode = opt.mode;
  for (const auto& m : a.root.members) mx.left_members.push_back(m.term);
  for (const auto& m : b.root.members) mx.right_members.push_back(m.term);
  mx.cells = detail::cell_grid(a.root.members, b.root.members,
                               [&](const Concept& x, const Concept& y) { return sigma(x, y, od, opt); });
  if (a.root.atomic() && b.root.atomic()) {
    mx.aggregate = sigma(a.root, b.root, od, opt);
  } else {
    mx.aggregate = detail::aggregate(mx.cells, opt.mode);
  }
  mx.verdict = verdict_of(mx.aggregate);
  return mx;
}

inline detail::ordered_json to_json(const SimilarityMatrix& mx, const SimOptions& opt) {
  detail::ordered_json j;
  j["left"] = {{"source", mx.left_source}, {"origin", mx.left_origin}, {"term", mx.left_term}};
  j["right"] = {{"source", mx.right_source}, {"origin", mx.right_origin}, {"term", mx.right_term}};
  j["mode"] = std::string(to_string(opt.mode));
  j["recursive_semantics"] = opt.recursive_semantics;
  j["left_members"] = mx.left_members;
  j["right_members"] = mx.right_members;
  j["cells"] = detail::ordered_json::array();
  for (const auto& row : mx.cells) {
    detail::ordered_json jr = detail::ordered_json::array();
    for (const auto& s : row) jr.push_back(s.str());
    j["cells"].push_back(std::move(jr));
  }
  j["aggregate"] = mx.aggregate.str();
  j["verdict"] = std::string(to_string(mx.verdict));
  j["apparent_names_equal"] = mx.apparent_names_equal();
  return j;
}

}  // namespace cmfuse
