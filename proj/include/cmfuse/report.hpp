#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cmfuse/integrate.hpp"
#include "cmfuse/simatch.hpp"
#include "cmfuse/term.hpp"

namespace cmfuse {

// ANSI styling for text output; disabled styles emit nothing.
struct Style {
  bool color = false;

  std::string paint(std::string_view text, std::string_view code) const {
    if (!color) return std::string(text);
    return "\x1b[" + std::string(code) + "m" + std::string(text) + "\x1b[0m";
  }
  std::string good(std::string_view t) const { return paint(t, "32"); }
  std::string warn(std::string_view t) const { return paint(t, "33"); }
  std::string bad(std::string_view t) const { return paint(t, "31"); }
  std::string bold(std::string_view t) const { return paint(t, "1"); }

  std::string classification(Classification c) const {
    const auto name = to_string(c);
    switch (c) {
      case Classification::equivalent: return good(name);
      case Classification::synonym_pair: return warn(name);
      case Classification::homonym_conflict: return bad(name);
      case Classification::distinct: return std::string(name);
    }
    return std::string(name);
  }
};

namespace detail {

inline std::string pad(std::string_view s, std::size_t width) {
  std::string out(s);
  const std::size_t w = display_width(s);
  if (w < width) out.append(width - w, ' ');
  return out;
}

// Pads on raw text, then styles, so escape codes do not skew alignment.
inline std::string pad_styled(std::string_view s, std::size_t width, const Style& st, bool one) {
  const std::string padded = pad(s, width);
  if (!st.color || !one) return padded;
  const std::string trimmed(s);
  return st.good(trimmed) + padded.substr(trimmed.size());
}

}  // namespace detail

// Grid in the layout of a member-by-member similarity table: left members as
// rows, right members as columns, exact fractions in every cell.
inline std::string render_matrix_text(const SimilarityMatrix& mx, const Style& st = {}) {
  const std::string corner = mx.left_origin + " (" + mx.left_source + ") \\ " + mx.right_origin +
                             " (" + mx.right_source + ")";
  std::size_t first_w = display_width(corner);
  for (const auto& t : mx.left_members) first_w = std::max(first_w, display_width(t));
  std::vector<std::size_t> col_w;
  for (std::size_t j = 0; j < mx.right_members.size(); ++j) {
    std::size_t w = display_width(mx.right_members[j]);
    for (const auto& row : mx.cells) w = std::max(w, row[j].str().size());
    col_w.push_back(w);
  }

  std::ostringstream os;
  auto line = [&](const std::string& head, auto&& cell) {
    std::string l = detail::pad(head, first_w);
    for (std::size_t j = 0; j < col_w.size(); ++j) l += " | " + cell(j);
    while (!l.empty() && l.back() == ' ') l.pop_back();
    os << l << "\n";
  };
  line(corner, [&](std::size_t j) { return detail::pad(mx.right_members[j], col_w[j]); });
  std::string rule(first_w, '-');
  for (std::size_t w : col_w) rule += "-+-" + std::string(w, '-');
  os << rule << "\n";
  for (std::size_t i = 0; i < mx.left_members.size(); ++i) {
    line(mx.left_members[i], [&](std::size_t j) {
      return detail::pad_styled(mx.cells[i][j].str(), col_w[j], st, mx.cells[i][j].is_one());
    });
  }
  os << "\n";
  os << "mode: " << to_string(mx.mode) << "\n";
  os << "aggregate: " << mx.aggregate.str() << "\n";
  const std::string verdict(to_string(mx.verdict));
  os << "verdict: " << (mx.verdict == Verdict::synonym ? st.good(verdict) : st.bad(verdict)) << "\n";
  os << "apparent names: " << (mx.apparent_names_equal() ? "equal" : "different") << " (\"" << mx.left_term
     << "\" / \"" << mx.right_term << "\")\n";
  os << "classification: " << st.classification(classify(mx.apparent_names_equal(), mx.verdict)) << "\n";
  return os.str();
}

inline std::string render_alignment_text(const Alignment& al, const Style& st = {}) {
  std::ostringstream os;
  std::size_t counts[4] = {0, 0, 0, 0};
  os << st.bold("Root correspondences") << "\n";
  for (const auto& c : al.correspondences) {
    if (!c.root_level()) continue;
    ++counts[static_cast<int>(c.classification)];
    os << "  " << c.left.path() << " <-> " << c.right.path() << "  score " << c.score.str() << "  "
       << st.classification(c.classification) << "\n";
  }
  os << "\n" << st.bold("Member correspondences") << "\n";
  bool any = false;
  for (const auto& c : al.correspondences) {
    if (c.root_level()) continue;
    any = true;
    os << "  " << c.left.path() << " <-> " << c.right.path() << "  " << st.classification(c.classification)
       << "\n";
  }
  if (!any) os << "  (none)\n";

  os << "\n" << st.bold("Naming conflicts") << "\n";
  const auto conflicts = detect_naming_conflicts(al);
  for (const auto& c : conflicts) {
    if (c.classification == Classification::homonym_conflict) {
      os << "  " << st.bad("homonym") << ": " << c.left.path() << " and " << c.right.path()
         << " share a name but are not synonymous (score " << c.score.str() << ")\n";
    } else {
      os << "  " << st.warn("synonym") << ": " << c.left.path() << " and " << c.right.path()
         << " are synonymous under different names\n";
    }
  }
  if (conflicts.empty()) os << "  (none)\n";

  os << "\nequivalent: " << counts[0] << ", synonym_pair: " << counts[1] << ", homonym_conflict: " << counts[2]
     << ", distinct: " << counts[3] << "\n";
  if (!al.diagnostics.empty()) {
    os << "\n" << st.bold("Diagnostics") << "\n";
    for (const auto& d : al.diagnostics) os << "  " << st.warn("warning") << ": " << d << "\n";
  }
  return os.str();
}

inline std::string render_merge_text(const MergedComponent& merged, const Style& st = {}) {
  std::ostringstream os;
  os << st.bold("Result components") << " (" << merged.result.system << ")\n";
  for (const auto& c : merged.result.components) {
    os << "  " << c.name << " [" << to_string(c.kind) << "]";
    std::string members;
    for (const auto& a : c.attributes) members += (members.empty() ? "" : ", ") + a.name;
    for (const auto& o : c.operations) members += (members.empty() ? "" : ", ") + o.name + "()";
    os << " { " << members << " }\n";
  }
  os << "\n" << st.bold("Equivalence links") << "\n";
  for (const auto& [a, b] : merged.representation.equivalences) os << "  " << a << " == " << b << "\n";
  if (merged.representation.equivalences.empty()) os << "  (none)\n";
  return os.str();
}

inline std::string render_alignment_json_report(const Alignment& al) {
  detail::ordered_json j;
  detail::ordered_json counts;
  for (auto c : {Classification::equivalent, Classification::synonym_pair, Classification::homonym_conflict,
                 Classification::distinct}) {
    counts[std::string(to_string(c))] = std::count_if(
        al.correspondences.begin(), al.correspondences.end(),
        [&](const Correspondence& x) { return x.root_level() && x.classification == c; });
  }
  j["counts"] = counts;
  j["naming_conflicts"] = detail::ordered_json::array();
  for (const auto& c : detect_naming_conflicts(al)) j["naming_conflicts"].push_back(to_json(c));
  j["member_correspondences"] = std::count_if(al.correspondences.begin(), al.correspondences.end(),
                                              [](const Correspondence& x) { return !x.root_level(); });
  j["diagnostics"] = al.diagnostics;
  return detail::dump(j);
}

}  // namespace cmfuse
