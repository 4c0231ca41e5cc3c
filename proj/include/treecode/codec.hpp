#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "treecode/bitstring.hpp"
#include "treecode/tree.hpp"

namespace treecode {

// TreeExplorer method bit: 0 = pit-climbing, 1 = tunnel-digging.
enum class CodingMethod : std::uint8_t { PitClimbing = 0, TunnelDigging = 1 };

// Pit-climbing moves: climb to a new node (1), climb to a node already seen
// (00), fall to the leftmost leaf of the next unexplored subtree (0).
enum class PcMove : std::uint8_t { Climb, ClimbSeen, Fall };

// Tunnel-digging symbols: leaf (1), internal node (00), tunnel between
// sibling groups or down a level (0).
enum class TdMove : std::uint8_t { Leaf, Internal, Tunnel };

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<PcMove> pc_trace(const OrderedTree& tree);
std::vector<TdMove> td_trace(const OrderedTree& tree);
BitString to_bits(std::span<const PcMove> moves);
BitString to_bits(std::span<const TdMove> moves);

// Nodes in the order the traversals first reach them; used to order labels.
// Pit-climbing: start leaf, then every fall target and every new climb
// target as it is reached. Tunnel-digging: root, then logging order.
std::vector<NodeId> pc_visit_order(const OrderedTree& tree);
std::vector<NodeId> td_visit_order(const OrderedTree& tree);

BitString encode_pc(const OrderedTree& tree);
BitString encode_td(const OrderedTree& tree);
inline BitString encode_pc(const Tree& tree) { return encode_pc(tree.ordered()); }
inline BitString encode_td(const Tree& tree) { return encode_td(tree.ordered()); }

// Pit-climbing when l < n/2, tunnel-digging otherwise (ties included).
CodingMethod select_method(const TreeStats& stats);
BitString encode_tree_explorer(const OrderedTree& tree);
inline BitString encode_tree_explorer(const Tree& tree) { return encode_tree_explorer(tree.ordered()); }

// An ordered tree recovered from a codeword together with the order in which
// the traversal reached its nodes (visit_order[k] is the k-th node reached).
struct DecodedShape {
  OrderedTree shape;
  std::vector<NodeId> visit_order;
  // True when the parse is the canonically ordered reading of the codeword.
  bool canonical_order = false;
};

// The binary codes merge distinct move sequences, and different trees can
// share a codeword. The decoders look for the reading whose sibling order is
// canonical with a fixed amount of search effort; if one is found, the
// decoded tree re-encodes to the same codeword. Otherwise they return the
// first valid reading in a fixed search order. Both searches are
// deterministic. n must match the node count implied by the bits.
DecodedShape decode_pc_shape(const BitString& bits, std::size_t n);
DecodedShape decode_td_shape(const BitString& bits, std::size_t n);

Tree decode_pc(const BitString& bits, std::size_t n);
Tree decode_td(const BitString& bits, std::size_t n);
Tree decode_tree_explorer(const BitString& bits, std::size_t n);

struct CodeLengths {
  std::size_t pc = 0;
  std::size_t td = 0;
  std::size_t te = 0;

  friend bool operator==(const CodeLengths&, const CodeLengths&) = default;
};

// pc = n+2l-3, td = 3n-2l-3 (both 0 for a single node), te = min + 1.
CodeLengths code_lengths(const TreeStats& stats);

}  // namespace treecode
