#pragma once

#include <functional>
#include <string>
#include <vector>

#include "treecode/newick.hpp"
#include "treecode/tree.hpp"

namespace testing {

inline treecode::Tree nw(const std::string& text) { return treecode::parse_newick(text).tree; }

inline treecode::Tree path(std::size_t n) {
  std::vector<std::int64_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::int64_t>(i) - 1;
  return treecode::Tree::canonicalize(p);
}

inline treecode::Tree star(std::size_t n) {
  std::vector<std::int64_t> p(n, 0);
  p[0] = -1;
  return treecode::Tree::canonicalize(p);
}

// Every ordered tree with n nodes as a preorder parent array.
inline void ordered_trees(std::size_t n, const std::function<void(const std::vector<treecode::NodeId>&)>& visit) {
  std::vector<treecode::NodeId> parents{treecode::kNoParent};
  std::vector<treecode::NodeId> spine{0};  // rightmost path
  std::function<void()> rec = [&] {
    if (parents.size() == n) {
      visit(parents);
      return;
    }
    for (std::size_t k = 0; k < spine.size(); ++k) {
      const std::vector<treecode::NodeId> saved = spine;
      const auto v = static_cast<treecode::NodeId>(parents.size());
      parents.push_back(spine[k]);
      spine.resize(k + 1);
      spine.push_back(v);
      rec();
      parents.pop_back();
      spine = saved;
    }
  };
  rec();
}

}  // namespace testing
