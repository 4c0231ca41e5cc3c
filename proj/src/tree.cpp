#include "treecode/tree.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

namespace treecode {

namespace {

// Children lists in canonical order. Ranks are assigned level by level from
// the bottom: siblings always share a depth, so a per-depth ranking that is
// consistent with level-sequence order is enough to sort every sibling list.
std::vector<std::vector<NodeId>> canonical_children(std::vector<std::vector<NodeId>> children,
                                                    NodeId root) {
  const std::size_t n = children.size();
  std::vector<NodeId> bfs;
  std::vector<std::uint32_t> depth(n, 0);
  bfs.reserve(n);
  bfs.push_back(root);
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    for (NodeId c : children[bfs[i]]) {
      depth[c] = depth[bfs[i]] + 1;
      bfs.push_back(c);
    }
  }

  std::vector<std::uint32_t> rank(n, 0);
  std::vector<std::vector<std::uint32_t>> key(n);
  std::size_t hi = bfs.size();
  while (hi > 0) {
    std::size_t lo = hi;
    const std::uint32_t d = depth[bfs[hi - 1]];
    while (lo > 0 && depth[bfs[lo - 1]] == d) --lo;

    std::vector<NodeId> level(bfs.begin() + static_cast<std::ptrdiff_t>(lo),
                              bfs.begin() + static_cast<std::ptrdiff_t>(hi));
    for (NodeId v : level) {
      auto& k = key[v];
      k.clear();
      for (NodeId c : children[v]) k.push_back(rank[c]);
      std::sort(k.begin(), k.end(), std::greater<>());
    }
    std::sort(level.begin(), level.end(), [&](NodeId a, NodeId b) { return key[a] < key[b]; });
    std::uint32_t r = 0;
    for (std::size_t i = 0; i < level.size(); ++i) {
      if (i > 0 && key[level[i - 1]] != key[level[i]]) ++r;
      rank[level[i]] = r;
    }
    // Keys of the level below are no longer needed.
    for (std::size_t i = hi; i < bfs.size() && depth[bfs[i]] == d + 1; ++i) {
      key[bfs[i]].clear();
      key[bfs[i]].shrink_to_fit();
    }
    hi = lo;
  }

  for (auto& list : children) {
    std::stable_sort(list.begin(), list.end(), [&](NodeId a, NodeId b) { return rank[a] > rank[b]; });
  }
  return children;
}

}  // namespace

OrderedTree::OrderedTree() : OrderedTree(std::vector<NodeId>{kNoParent}) {}

OrderedTree::OrderedTree(std::vector<NodeId> parents) : parent_(std::move(parents)) {
  const std::size_t n = parent_.size();
  offset_.assign(n + 1, 0);
  for (std::size_t i = 1; i < n; ++i) ++offset_[parent_[i] + 1];
  std::partial_sum(offset_.begin(), offset_.end(), offset_.begin());
  child_.resize(n - 1);
  std::vector<std::uint32_t> fill(offset_.begin(), offset_.end() - 1);
  for (std::size_t i = 1; i < n; ++i) child_[fill[parent_[i]]++] = static_cast<NodeId>(i);
}

OrderedTree OrderedTree::from_preorder_parents(std::vector<NodeId> parents) {
  if (parents.empty() || parents.size() > kMaxNodes) throw TreeError("node count out of range");
  if (parents[0] != kNoParent) throw TreeError("node 0 must be the root");
  // In preorder every parent lies on the current root-to-node path.
  std::vector<NodeId> path{0};
  for (std::size_t i = 1; i < parents.size(); ++i) {
    const NodeId p = parents[i];
    if (p >= i) throw TreeError("parent index must precede child in preorder");
    while (!path.empty() && path.back() != p) path.pop_back();
    if (path.empty()) throw TreeError("parent array is not a preorder numbering");
    path.push_back(static_cast<NodeId>(i));
  }
  return OrderedTree(std::move(parents));
}

OrderedTree OrderedTree::from_children(std::span<const std::vector<NodeId>> children, NodeId root,
                                       std::vector<NodeId>* to_preorder) {
  const std::size_t n = children.size();
  if (n == 0 || n > kMaxNodes) throw TreeError("node count out of range");
  if (root >= n) throw TreeError("root index out of range");
  std::vector<NodeId> id(n, kNoParent);
  std::vector<NodeId> parents;
  parents.reserve(n);
  // Iterative preorder; the stack holds (node, parent-preorder-id).
  std::vector<std::pair<NodeId, NodeId>> stack{{root, kNoParent}};
  while (!stack.empty()) {
    auto [v, p] = stack.back();
    stack.pop_back();
    if (v >= n) throw TreeError("child index out of range");
    if (id[v] != kNoParent) throw TreeError("cycle detected");
    id[v] = static_cast<NodeId>(parents.size());
    parents.push_back(p);
    const auto& kids = children[v];
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.emplace_back(*it, id[v]);
  }
  if (parents.size() != n) throw TreeError("tree is not connected");
  if (to_preorder) *to_preorder = std::move(id);
  return OrderedTree(std::move(parents));
}

std::vector<std::uint32_t> OrderedTree::level_sequence() const {
  std::vector<std::uint32_t> depth(size(), 0);
  for (std::size_t i = 1; i < size(); ++i) depth[i] = depth[parent_[i]] + 1;
  return depth;
}

NodeId OrderedTree::subtree_end(NodeId v) const {
  while (!is_leaf(v)) v = children(v).back();
  return v + 1;
}

int compare_subtrees(const OrderedTree& tree, NodeId a, NodeId b) {
  // Relative depths along the two contiguous preorder ranges.
  const NodeId end_a = tree.subtree_end(a);
  const NodeId end_b = tree.subtree_end(b);
  std::vector<std::uint32_t> da{0}, db{0};
  for (NodeId i = a + 1, j = b + 1;; ++i, ++j) {
    const bool more_a = i < end_a;
    const bool more_b = j < end_b;
    if (!more_a || !more_b) return more_a == more_b ? 0 : (more_a ? 1 : -1);
    // depth of i relative to a: its parent is an earlier node of the range.
    da.push_back(da[tree.parent(i) - a] + 1);
    db.push_back(db[tree.parent(j) - b] + 1);
    if (da.back() != db.back()) return da.back() < db.back() ? -1 : 1;
  }
}

bool is_canonical(const OrderedTree& tree) {
  for (NodeId v = 0; v < tree.size(); ++v) {
    auto kids = tree.children(v);
    for (std::size_t i = 1; i < kids.size(); ++i) {
      if (compare_subtrees(tree, kids[i - 1], kids[i]) < 0) return false;
    }
  }
  return true;
}

Tree Tree::canonicalize(std::span<const std::int64_t> parents) {
  const std::size_t n = parents.size();
  if (n == 0 || n > kMaxNodes) throw TreeError("node count out of range");
  std::vector<std::vector<NodeId>> children(n);
  NodeId root = kNoParent;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t p = parents[i];
    if (p == -1) {
      if (root != kNoParent) throw TreeError("multiple roots");
      root = static_cast<NodeId>(i);
    } else if (p < 0 || p >= static_cast<std::int64_t>(n)) {
      throw TreeError("parent index out of range at node " + std::to_string(i));
    } else if (static_cast<std::size_t>(p) == i) {
      throw TreeError("cycle detected at node " + std::to_string(i));
    } else {
      children[static_cast<std::size_t>(p)].push_back(static_cast<NodeId>(i));
    }
  }
  if (root == kNoParent) throw TreeError("no root");
  // Every non-root node has exactly one parent, so an unreachable node can
  // only sit on a cycle.
  std::size_t reached = 0;
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    ++reached;
    for (NodeId c : children[v]) stack.push_back(c);
  }
  if (reached != n) throw TreeError("cycle detected");
  auto sorted = canonical_children(std::move(children), root);
  return Tree(OrderedTree::from_children(sorted, root));
}

Tree Tree::canonicalize(const OrderedTree& tree, std::vector<NodeId>* perm) {
  std::vector<std::vector<NodeId>> children(tree.size());
  for (NodeId v = 0; v < tree.size(); ++v) {
    auto kids = tree.children(v);
    children[v].assign(kids.begin(), kids.end());
  }
  auto sorted = canonical_children(std::move(children), 0);
  return Tree(OrderedTree::from_children(sorted, 0, perm));
}

Tree Tree::from_canonical_level_sequence(std::span<const std::uint32_t> levels) {
  if (levels.empty() || levels.size() > kMaxNodes || levels[0] != 0) {
    throw TreeError("invalid level sequence");
  }
  std::vector<NodeId> parents(levels.size(), kNoParent);
  std::vector<NodeId> last_at_depth{0};
  for (std::size_t i = 1; i < levels.size(); ++i) {
    const std::uint32_t d = levels[i];
    if (d == 0 || d > last_at_depth.size()) throw TreeError("invalid level sequence");
    parents[i] = last_at_depth[d - 1];
    last_at_depth.resize(d);
    last_at_depth.push_back(static_cast<NodeId>(i));
  }
  return Tree(OrderedTree::from_preorder_parents(std::move(parents)));
}

std::vector<std::int64_t> Tree::parent_array() const {
  std::vector<std::int64_t> out(size());
  for (std::size_t i = 0; i < size(); ++i) {
    out[i] = i == 0 ? -1 : static_cast<std::int64_t>(parent(static_cast<NodeId>(i)));
  }
  return out;
}

TreeStats stats(const OrderedTree& tree) {
  TreeStats s;
  s.n = tree.size();
  s.leaves = 0;
  s.depth = 0;
  auto depth = tree.level_sequence();
  for (NodeId v = 0; v < tree.size(); ++v) {
    if (tree.is_leaf(v)) ++s.leaves;
    s.depth = std::max<std::size_t>(s.depth, depth[v]);
  }
  return s;
}

std::vector<std::int64_t> read_parent_array(std::istream& in) {
  long long n = 0;
  if (!(in >> n)) throw TreeError("parent array: missing node count");
  if (n < 1 || n > static_cast<long long>(kMaxNodes)) throw TreeError("parent array: node count out of range");
  std::vector<std::int64_t> parents(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    if (!(in >> parents[static_cast<std::size_t>(i)])) {
      throw TreeError("parent array: expected " + std::to_string(n) + " entries, got " + std::to_string(i));
    }
  }
  return parents;
}

std::vector<std::vector<std::int64_t>> read_parent_arrays(std::istream& in) {
  std::vector<std::vector<std::int64_t>> out;
  while (in >> std::ws, in.peek() != std::char_traits<char>::eof()) out.push_back(read_parent_array(in));
  return out;
}

void write_parent_array(std::ostream& out, std::span<const std::int64_t> parents) {
  out << parents.size() << '\n';
  for (std::size_t i = 0; i < parents.size(); ++i) {
    if (i) out << ' ';
    out << parents[i];
  }
  out << '\n';
}

}  // namespace treecode
