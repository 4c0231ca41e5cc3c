#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace treecode {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoParent = std::numeric_limits<NodeId>::max();

// Upper bound on node count; the packet header stores n in 16 bits.
inline constexpr std::size_t kMaxNodes = 65535;

class TreeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Rooted ordered tree numbered in preorder: node 0 is the root,
// parent(i) < i, and the children of a node appear in increasing index order.
class OrderedTree {
 public:
  OrderedTree();  // single node

  // `parents` must already be a preorder numbering (root marked kNoParent).
  static OrderedTree from_preorder_parents(std::vector<NodeId> parents);

  // Builds from explicit ordered child lists over arbitrary node ids.
  // `to_preorder`, when given, receives the old-id -> preorder-id map.
  static OrderedTree from_children(std::span<const std::vector<NodeId>> children, NodeId root,
                                   std::vector<NodeId>* to_preorder = nullptr);

  std::size_t size() const { return parent_.size(); }
  NodeId parent(NodeId v) const { return parent_[v]; }
  std::span<const NodeId> parents() const { return parent_; }
  std::span<const NodeId> children(NodeId v) const {
    return {child_.data() + offset_[v], child_.data() + offset_[v + 1]};
  }
  std::size_t child_count(NodeId v) const { return offset_[v + 1] - offset_[v]; }
  bool is_leaf(NodeId v) const { return child_count(v) == 0; }

  // Depth of every node in preorder (the level sequence).
  std::vector<std::uint32_t> level_sequence() const;

  // Preorder index one past the last descendant of v.
  NodeId subtree_end(NodeId v) const;

  friend bool operator==(const OrderedTree& a, const OrderedTree& b) { return a.parent_ == b.parent_; }

 private:
  explicit OrderedTree(std::vector<NodeId> parents);

  std::vector<NodeId> parent_;
  std::vector<std::uint32_t> offset_;
  std::vector<NodeId> child_;
};

struct TreeStats {
  std::size_t n = 1;
  std::size_t leaves = 1;
  std::size_t depth = 0;

  friend bool operator==(const TreeStats&, const TreeStats&) = default;
};

// Unlabeled unordered rooted tree held in canonical ordered form: the
// children of every node are sorted by nonincreasing lexicographic order of
// their subtrees' level sequences. Two trees are isomorphic iff equal.
class Tree {
 public:
  Tree() = default;  // single node

  // Raw parent array: exactly one entry is -1 (the root); any numbering.
  static Tree canonicalize(std::span<const std::int64_t> parents);

  // Canonical form of an ordered tree. `perm`, when given, receives the
  // input-id -> canonical-id map. Siblings with identical subtrees keep their
  // input relative order, so an already canonical tree maps to itself.
  static Tree canonicalize(const OrderedTree& tree, std::vector<NodeId>* perm = nullptr);

  // Trusted constructor for a level sequence already in canonical form.
  static Tree from_canonical_level_sequence(std::span<const std::uint32_t> levels);

  const OrderedTree& ordered() const { return shape_; }
  std::size_t size() const { return shape_.size(); }
  NodeId parent(NodeId v) const { return shape_.parent(v); }
  std::span<const NodeId> children(NodeId v) const { return shape_.children(v); }
  bool is_leaf(NodeId v) const { return shape_.is_leaf(v); }
  std::vector<std::uint32_t> level_sequence() const { return shape_.level_sequence(); }

  // Parent array with the root written as -1.
  std::vector<std::int64_t> parent_array() const;

  friend bool operator==(const Tree& a, const Tree& b) { return a.shape_ == b.shape_; }

 private:
  explicit Tree(OrderedTree shape) : shape_(std::move(shape)) {}
  OrderedTree shape_;
};

TreeStats stats(const OrderedTree& tree);
inline TreeStats stats(const Tree& tree) { return stats(tree.ordered()); }

// True when every sibling list is in canonical order.
bool is_canonical(const OrderedTree& tree);

// Lexicographic comparison of the level sequences of the subtrees rooted at
// a and b (depths taken relative to each subtree root).
int compare_subtrees(const OrderedTree& tree, NodeId a, NodeId b);

// Parent-array text: first token n, then n integers with the root as -1.
// Reads one record.
std::vector<std::int64_t> read_parent_array(std::istream& in);
// Reads records until end of input.
std::vector<std::vector<std::int64_t>> read_parent_arrays(std::istream& in);
void write_parent_array(std::ostream& out, std::span<const std::int64_t> parents);

}  // namespace treecode
