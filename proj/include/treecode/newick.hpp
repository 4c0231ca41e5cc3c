#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "treecode/tree.hpp"

namespace treecode {

using Label = std::uint32_t;

class NewickError : public std::runtime_error {
 public:
  NewickError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at offset " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Leaves are empty (or their label), internal nodes are "(c1,c2,...)" with an
// optional trailing label, and the text ends with ';'.
std::string emit_newick(const OrderedTree& tree, std::span<const Label> labels = {});
inline std::string emit_newick(const Tree& tree, std::span<const Label> labels = {}) {
  return emit_newick(tree.ordered(), labels);
}

struct NewickTree {
  Tree tree;
  // Present when the text carried labels; indexed by canonical node id.
  std::optional<std::vector<Label>> labels;
};

// Labels, if any, must be present on every node. Trailing whitespace after
// ';' is ignored.
NewickTree parse_newick(std::string_view text);

// Cost of the Newick text at two bits per structural character plus a
// one-bit terminator: 4n - 2l - 1.
std::size_t newick_bit_length(const TreeStats& stats);

}  // namespace treecode
