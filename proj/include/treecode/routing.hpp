#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "treecode/counting.hpp"
#include "treecode/newick.hpp"
#include "treecode/tree.hpp"

namespace treecode {

class RoutingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PacketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Canonical tree plus a label per node; the labels are a permutation of
// [0, n). Identical sibling subtrees are ordered by the label of their root,
// so label-preserving isomorphic inputs give equal values.
class LabeledTree {
 public:
  LabeledTree() = default;  // single node labeled 0

  // labels[v] is the label of node v of `shape`.
  static LabeledTree make(const OrderedTree& shape, std::span<const Label> labels);

  const Tree& tree() const { return tree_; }
  std::span<const Label> labels() const { return labels_; }
  Label label(NodeId v) const { return labels_[v]; }
  std::size_t size() const { return tree_.size(); }

  friend bool operator==(const LabeledTree&, const LabeledTree&) = default;

 private:
  LabeledTree(Tree tree, std::vector<Label> labels) : tree_(std::move(tree)), labels_(std::move(labels)) {}
  Tree tree_;
  std::vector<Label> labels_{0};
};

// Random permutation of [0, n) attached to `tree`.
LabeledTree random_labeling(const Tree& tree, Rng& rng);

struct Route {
  Label destination = 0;
  std::vector<Label> hops;  // source first, destination last

  friend bool operator==(const Route&, const Route&) = default;
};

struct PathVectorTable {
  Label source = 0;
  std::vector<Route> routes;

  friend bool operator==(const PathVectorTable&, const PathVectorTable&) = default;
};

// Tree of all routes rooted at the source. The labels used by the table must
// be exactly [0, n).
LabeledTree table_from_paths(const PathVectorTable& table);
// One route per non-root node, sorted by destination.
PathVectorTable tree_to_table(const LabeledTree& lt);

// Label field width: max(1, ceil(log2 n)).
unsigned label_width(std::size_t n);

inline constexpr std::uint8_t kPacketStructureOnly = 0x10;
inline constexpr std::uint8_t kPacketLabeled = 0x11;
inline constexpr std::size_t kPacketHeaderBytes = 3;

// Header (flags, 16-bit big-endian n), then the TreeExplorer code, then the
// labels in traversal order when requested, zero-padded to a byte.
std::vector<std::uint8_t> encode_packet(const LabeledTree& lt, bool include_labels);
std::vector<std::uint8_t> encode_packet(const Tree& tree);

struct PacketContents {
  Tree structure;
  std::optional<LabeledTree> labeled;  // set when the packet carries labels
};

PacketContents decode_packet(std::span<const std::uint8_t> bytes);

// Per-destination messages listing every hop at label_width(n) bits each.
std::size_t baseline_path_vector_bits(const PathVectorTable& table);

// Text form: first line "source <label>", then one route per line as
// space-separated labels. Blank lines and lines starting with '#' are skipped.
PathVectorTable read_route_list(std::istream& in);
void write_route_list(std::ostream& out, const PathVectorTable& table);

}  // namespace treecode
