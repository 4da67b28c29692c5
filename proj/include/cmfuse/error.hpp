#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cmfuse {

// One problem found in an input document. `where` is either a JSON pointer
// ("/components/0/attributes/1") or "line:column" for syntax errors.
struct Issue {
  std::string where;
  std::string message;

  std::string str() const { return where.empty() ? message : where + ": " + message; }
};

enum class ErrorKind {
  syntax,      // not well-formed JSON / wrong shape
  validation,  // well-formed but violates an invariant
  reference,   // dangling id or edge in otherwise valid data
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::vector<Issue> issues)
      : std::runtime_error(summarize(issues)), kind_(kind), issues_(std::move(issues)) {}
  Error(ErrorKind kind, std::string where, std::string message)
      : Error(kind, std::vector<Issue>{{std::move(where), std::move(message)}}) {}

  ErrorKind kind() const { return kind_; }
  const std::vector<Issue>& issues() const { return issues_; }

 private:
  static std::string summarize(const std::vector<Issue>& issues) {
    if (issues.empty()) return "invalid input";
    std::string out = issues.front().str();
    if (issues.size() > 1) out += " (+" + std::to_string(issues.size() - 1) + " more)";
    return out;
  }

  ErrorKind kind_;
  std::vector<Issue> issues_;
};

}  // namespace cmfuse
