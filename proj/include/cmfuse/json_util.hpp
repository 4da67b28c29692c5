#pragma once

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cmfuse/error.hpp"

namespace cmfuse::detail {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline std::string line_column(std::string_view doc, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < doc.size(); ++i) {
    if (doc[i] == '\n') {
      ++line;
      col = 1;
    } else if ((static_cast<unsigned char>(doc[i]) & 0xC0) != 0x80) {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

inline json parse_json(std::string_view doc) {
  try {
    return json::parse(doc.begin(), doc.end());
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points one past the offending character.
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    std::string msg = e.what();
    if (auto p = msg.find("parse error"); p != std::string::npos) msg = msg.substr(p);
    throw Error(ErrorKind::syntax, line_column(doc, at), msg);
  }
}

inline std::string child(const std::string& ptr, std::string_view key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') escaped += "~0";
    else if (c == '/') escaped += "~1";
    else escaped += c;
  }
  return ptr + "/" + escaped;
}

inline std::string child(const std::string& ptr, std::size_t index) {
  return ptr + "/" + std::to_string(index);
}

// Accumulates shape problems so a whole document can be reported at once.
class Reader {
 public:
  void fail(std::string where, std::string message) {
    issues_.push_back({std::move(where), std::move(message)});
  }

  bool ok() const { return issues_.empty(); }
  const std::vector<Issue>& issues() const { return issues_; }

  void throw_if_failed(ErrorKind kind) const {
    if (!issues_.empty()) throw Error(kind, issues_);
  }

  // Checks `j` is an object whose keys are a subset of `allowed` and a
  // superset of `required`.
  bool object(const json& j, const std::string& ptr,
              std::initializer_list<std::string_view> allowed,
              std::initializer_list<std::string_view> required) {
    if (!j.is_object()) {
      fail(ptr.empty() ? "/" : ptr, "expected an object");
      return false;
    }
    bool good = true;
    for (const auto& [key, value] : j.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(child(ptr, key), "unknown key \"" + key + "\"");
        good = false;
      }
    }
    for (std::string_view key : required) {
      if (!j.contains(key)) {
        fail(ptr.empty() ? "/" : ptr, "missing required key \"" + std::string(key) + "\"");
        good = false;
      }
    }
    return good;
  }

  std::optional<std::string> string(const json& parent, std::string_view key,
                                    const std::string& ptr) {
    auto it = parent.find(key);
    if (it == parent.end()) return std::nullopt;
    if (!it->is_string()) {
      fail(child(ptr, key), "expected a string");
      return std::nullopt;
    }
    return it->get<std::string>();
  }

  std::vector<std::string> strings(const json& parent, std::string_view key,
                                   const std::string& ptr) {
    std::vector<std::string> out;
    auto it = parent.find(key);
    if (it == parent.end()) return out;
    const std::string here = child(ptr, key);
    if (!it->is_array()) {
      fail(here, "expected an array of strings");
      return out;
    }
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& item = (*it)[i];
      if (!item.is_string()) {
        fail(child(here, i), "expected a string");
        continue;
      }
      out.push_back(item.get<std::string>());
    }
    return out;
  }

  // Returns the array at `key` or nullptr (and records why).
  const json* array(const json& parent, std::string_view key, const std::string& ptr) {
    auto it = parent.find(key);
    if (it == parent.end()) return nullptr;
    if (!it->is_array()) {
      fail(child(ptr, key), "expected an array");
      return nullptr;
    }
    return &*it;
  }

 private:
  std::vector<Issue> issues_;
};

inline std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace cmfuse::detail
