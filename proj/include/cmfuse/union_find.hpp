#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace cmfuse {

// Disjoint sets over 0..n-1. The representative of a class is always its
// smallest element, which keeps merge output independent of edge order.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    std::size_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::size_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

  bool same(std::size_t a, std::size_t b) { return find(a) == find(b); }
  std::size_t size() const { return parent_.size(); }

  // Classes ordered by representative, members ascending.
  std::vector<std::vector<std::size_t>> classes() {
    std::vector<std::vector<std::size_t>> by_rep(parent_.size());
    for (std::size_t i = 0; i < parent_.size(); ++i) by_rep[find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> out;
    for (auto& c : by_rep) {
      if (!c.empty()) out.push_back(std::move(c));
    }
    return out;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace cmfuse
