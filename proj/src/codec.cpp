#include "treecode/codec.hpp"

#include <algorithm>
#include <optional>
#include <unordered_set>

namespace treecode {

namespace {

struct PcWalk {
  std::vector<PcMove> moves;
  std::vector<NodeId> visit_order;
};

PcWalk walk_pc(const OrderedTree& tree) {
  PcWalk out;
  const std::size_t n = tree.size();
  out.visit_order.reserve(n);
  if (n == 1) {
    out.visit_order.push_back(0);
    return out;
  }
  std::vector<bool> seen(n, false);
  // Every internal node is first reached from its first child, so the next
  // child to explore starts at index 1 everywhere.
  std::vector<std::uint32_t> next(n, 1);
  auto leftmost_leaf = [&](NodeId v) {
    while (!tree.is_leaf(v)) v = tree.children(v).front();
    return v;
  };
  NodeId cur = leftmost_leaf(0);
  seen[cur] = true;
  out.visit_order.push_back(cur);
  for (;;) {
    if (next[cur] < tree.child_count(cur)) {
      cur = leftmost_leaf(tree.children(cur)[next[cur]++]);
      seen[cur] = true;
      out.moves.push_back(PcMove::Fall);
      out.visit_order.push_back(cur);
      continue;
    }
    if (cur == 0) break;
    cur = tree.parent(cur);
    if (seen[cur]) {
      out.moves.push_back(PcMove::ClimbSeen);
    } else {
      seen[cur] = true;
      out.moves.push_back(PcMove::Climb);
      out.visit_order.push_back(cur);
    }
  }
  return out;
}

struct TdWalk {
  std::vector<TdMove> moves;
  std::vector<NodeId> visit_order;
};

TdWalk walk_td(const OrderedTree& tree) {
  TdWalk out;
  out.visit_order.push_back(0);
  if (tree.is_leaf(0)) return out;
  // Sibling groups are visited in breadth-first order of their parents.
  std::vector<NodeId> parents{0};
  for (std::size_t g = 0; g < parents.size(); ++g) {
    if (g > 0) out.moves.push_back(TdMove::Tunnel);
    for (NodeId c : tree.children(parents[g])) {
      out.visit_order.push_back(c);
      if (tree.is_leaf(c)) {
        out.moves.push_back(TdMove::Leaf);
      } else {
        out.moves.push_back(TdMove::Internal);
        parents.push_back(c);
      }
    }
  }
  return out;
}

// Lexicographic comparison of the level sequences of two complete subtrees
// held as child lists.
int compare_partial(const std::vector<std::vector<NodeId>>& kids, NodeId a, NodeId b) {
  struct Cursor {
    const std::vector<std::vector<NodeId>>& kids;
    std::vector<std::pair<NodeId, std::size_t>> stack;
    // Advances to the next node in preorder; returns its relative depth or -1.
    long next() {
      while (!stack.empty()) {
        auto& [v, i] = stack.back();
        if (i < kids[v].size()) {
          const NodeId c = kids[v][i++];
          stack.emplace_back(c, 0);
          return static_cast<long>(stack.size()) - 1;
        }
        stack.pop_back();
      }
      return -1;
    }
  };
  Cursor ca{kids, {{a, 0}}}, cb{kids, {{b, 0}}};
  for (;;) {
    const long da = ca.next();
    const long db = cb.next();
    if (da != db) {
      if (da < 0) return -1;
      if (db < 0) return 1;
      return da < db ? -1 : 1;
    }
    if (da < 0) return 0;
  }
}

// Effort allowed for finding the canonically ordered reading before falling
// back to the first valid reading. The fallback search memoizes every failed
// state, so it is bounded by the number of distinct states.
constexpr std::size_t kCanonicalSearchSteps = 100'000;
constexpr std::size_t kSearchSteps = 200'000'000;
// Candidate order: try a fall (pit-climbing) or a tunnel (tunnel-digging)
// before the alternative reading of the same bits.
constexpr bool kPcFallFirst = true;
constexpr bool kTdTunnelFirst = true;

// Depth-first search over the readings of a codeword. Parser supplies the
// move alphabet, candidate generation, apply/undo, and a state key that
// determines grammar feasibility of the remaining suffix. States proven
// infeasible without any canonical-order pruning are memoized.
template <class Parser>
bool search(Parser& p, bool canonical, std::size_t budget, std::unordered_set<std::uint64_t>& dead) {
  using Move = typename Parser::Move;
  using Step = typename Parser::Step;
  struct Frame {
    std::uint64_t key = 0;
    Move options[2]{};
    std::uint8_t count = 0;
    std::uint8_t next = 0;
    bool pruned = false;
    Step step{};
  };
  auto advance = [&](Frame& f) {
    while (f.next < f.count) {
      bool pruned = false;
      if (p.apply(f.options[f.next++], canonical, f.step, pruned)) return true;
      f.pruned |= pruned;
    }
    return false;
  };
  std::vector<Frame> trail;
  std::size_t steps = 0;
  for (;;) {
    if (++steps > budget) return false;
    Frame f;
    f.key = p.key();
    if (p.at_end()) {
      if (p.accept(canonical, f.pruned)) return true;
    } else if (!dead.contains(f.key)) {
      f.count = p.candidates(f.options);
    }
    if (advance(f)) {
      trail.push_back(f);
      continue;
    }
    bool pruned_below = f.pruned;
    if (!pruned_below) dead.insert(f.key);
    for (;;) {
      if (trail.empty()) return false;
      Frame& top = trail.back();
      p.undo(top.step);
      top.pruned |= pruned_below;
      if (advance(top)) break;
      pruned_below = top.pruned;
      if (!pruned_below) dead.insert(top.key);
      trail.pop_back();
    }
  }
}

class PcParser {
 public:
  using Move = PcMove;
  struct Step {
    Move move = PcMove::Climb;
    bool was_at_leaf = false;
  };

  PcParser(const BitString& bits, std::size_t n) : bits_(bits), n_(n) { reset(); }

  void reset() {
    pos_ = 0;
    at_leaf_ = true;
    parent_.assign(1, kNoParent);
    kids_.assign(1, {});
    stack_.assign(1, 0);
  }

  bool at_end() const { return pos_ == bits_.size(); }
  std::uint64_t key() const {
    return (static_cast<std::uint64_t>(pos_) << 32) | (static_cast<std::uint64_t>(stack_.size()) << 1) |
           (at_leaf_ ? 1u : 0u);
  }

  bool accept(bool, bool&) const { return stack_.size() == 1 && parent_.size() == n_; }

  std::uint8_t candidates(Move* out) const {
    const bool room = parent_.size() < n_;
    if (bits_[pos_]) {
      if (!room) return 0;
      out[0] = PcMove::Climb;
      return 1;
    }
    std::uint8_t k = 0;
    if (kPcFallFirst && !at_leaf_ && room) out[k++] = PcMove::Fall;
    if (stack_.size() >= 2 && pos_ + 1 < bits_.size() && !bits_[pos_ + 1]) out[k++] = PcMove::ClimbSeen;
    if (!kPcFallFirst && !at_leaf_ && room) out[k++] = PcMove::Fall;
    return k;
  }

  bool apply(Move m, bool canonical, Step& step, bool& pruned) {
    step.move = m;
    step.was_at_leaf = at_leaf_;
    switch (m) {
      case PcMove::Climb: {
        const NodeId top = stack_.back();
        const NodeId p = new_node();
        parent_[top] = p;
        kids_[p].push_back(top);
        stack_.back() = p;
        pos_ += 1;
        at_leaf_ = false;
        return true;
      }
      case PcMove::Fall: {
        stack_.push_back(new_node());
        pos_ += 1;
        at_leaf_ = true;
        return true;
      }
      case PcMove::ClimbSeen: {
        const NodeId x = stack_.back();
        const NodeId origin = stack_[stack_.size() - 2];
        if (canonical && !kids_[origin].empty() && compare_partial(kids_, kids_[origin].back(), x) < 0) {
          pruned = true;
          return false;
        }
        stack_.pop_back();
        parent_[x] = origin;
        kids_[origin].push_back(x);
        pos_ += 2;
        at_leaf_ = false;
        return true;
      }
    }
    return false;
  }

  void undo(const Step& step) {
    switch (step.move) {
      case PcMove::Climb: {
        const NodeId p = stack_.back();
        const NodeId top = kids_[p].front();
        parent_[top] = kNoParent;
        stack_.back() = top;
        drop_node();
        pos_ -= 1;
        break;
      }
      case PcMove::Fall:
        stack_.pop_back();
        drop_node();
        pos_ -= 1;
        break;
      case PcMove::ClimbSeen: {
        const NodeId origin = stack_.back();
        const NodeId x = kids_[origin].back();
        kids_[origin].pop_back();
        parent_[x] = kNoParent;
        stack_.push_back(x);
        pos_ -= 2;
        break;
      }
    }
    at_leaf_ = step.was_at_leaf;
  }

  DecodedShape result(bool canonical) const {
    DecodedShape out;
    std::vector<NodeId> to_preorder;
    out.shape = OrderedTree::from_children(kids_, stack_.front(), &to_preorder);
    out.visit_order = std::move(to_preorder);  // node ids are creation order
    out.canonical_order = canonical;
    return out;
  }

 private:
  NodeId new_node() {
    parent_.push_back(kNoParent);
    kids_.emplace_back();
    return static_cast<NodeId>(parent_.size() - 1);
  }
  void drop_node() {
    parent_.pop_back();
    kids_.pop_back();
  }

  const BitString& bits_;
  std::size_t n_;
  std::size_t pos_ = 0;
  bool at_leaf_ = true;
  std::vector<NodeId> parent_;
  std::vector<std::vector<NodeId>> kids_;
  std::vector<NodeId> stack_;  // current node on top; below it the fall origins
};

class TdParser {
 public:
  using Move = TdMove;
  struct Step {
    Move move = TdMove::Leaf;
    std::uint32_t group_size = 0;
  };

  TdParser(const BitString& bits, std::size_t n) : bits_(bits), n_(n) { reset(); }

  void reset() {
    pos_ = 0;
    group_ = 0;
    group_size_ = 0;
    parent_.assign(1, kNoParent);
    kids_.assign(1, {});
    internal_.assign(1, true);
    pending_.assign(1, 1);
    queue_.assign(1, 0);
  }

  bool at_end() const { return pos_ == bits_.size(); }
  std::uint64_t key() const {
    return (static_cast<std::uint64_t>(pos_) << 32) | (static_cast<std::uint64_t>(group_) << 1) |
           (group_size_ > 0 ? 1u : 0u);
  }

  bool accept(bool canonical, bool& pruned) {
    if (group_ + 1 != queue_.size() || group_size_ == 0 || parent_.size() != n_) return false;
    const bool ok = close_group(queue_[group_], canonical);
    reopen_group(queue_[group_]);
    if (!ok) pruned = true;
    return ok;
  }

  std::uint8_t candidates(Move* out) const {
    const bool room = parent_.size() < n_;
    if (bits_[pos_]) {
      if (!room) return 0;
      out[0] = TdMove::Leaf;
      return 1;
    }
    std::uint8_t k = 0;
    if (kTdTunnelFirst && group_size_ > 0 && group_ + 1 < queue_.size()) out[k++] = TdMove::Tunnel;
    if (room && pos_ + 1 < bits_.size() && !bits_[pos_ + 1]) out[k++] = TdMove::Internal;
    if (!kTdTunnelFirst && group_size_ > 0 && group_ + 1 < queue_.size()) out[k++] = TdMove::Tunnel;
    return k;
  }

  bool apply(Move m, bool canonical, Step& step, bool& pruned) {
    step.move = m;
    step.group_size = group_size_;
    const NodeId owner = queue_[group_];
    switch (m) {
      case TdMove::Leaf:
        add_child(owner, false);
        pos_ += 1;
        ++group_size_;
        return true;
      case TdMove::Internal:
        // A leaf sibling sorts below any internal node.
        if (canonical && group_size_ > 0 && !internal_[kids_[owner].back()]) {
          pruned = true;
          return false;
        }
        add_child(owner, true);
        pos_ += 2;
        ++group_size_;
        return true;
      case TdMove::Tunnel:
        if (!close_group(owner, canonical)) {
          reopen_group(owner);
          pruned = true;
          return false;
        }
        ++group_;
        group_size_ = 0;
        pos_ += 1;
        return true;
    }
    return false;
  }

  void undo(const Step& step) {
    switch (step.move) {
      case TdMove::Leaf:
      case TdMove::Internal: {
        const NodeId owner = queue_[group_];
        const NodeId c = kids_[owner].back();
        kids_[owner].pop_back();
        if (internal_[c]) {
          queue_.pop_back();
          for (NodeId a = owner; a != kNoParent; a = parent_[a]) --pending_[a];
        }
        parent_.pop_back();
        kids_.pop_back();
        internal_.pop_back();
        pending_.pop_back();
        pos_ -= step.move == TdMove::Leaf ? 1 : 2;
        break;
      }
      case TdMove::Tunnel:
        --group_;
        reopen_group(queue_[group_]);
        pos_ -= 1;
        break;
    }
    group_size_ = step.group_size;
  }

  DecodedShape result(bool canonical) const {
    DecodedShape out;
    std::vector<NodeId> to_preorder;
    out.shape = OrderedTree::from_children(kids_, 0, &to_preorder);
    out.visit_order = std::move(to_preorder);
    out.canonical_order = canonical;
    return out;
  }

 private:
  void add_child(NodeId owner, bool internal) {
    const auto c = static_cast<NodeId>(parent_.size());
    parent_.push_back(owner);
    kids_.emplace_back();
    internal_.push_back(internal);
    pending_.push_back(internal ? 1 : 0);
    kids_[owner].push_back(c);
    if (internal) {
      queue_.push_back(c);
      for (NodeId a = owner; a != kNoParent; a = parent_[a]) ++pending_[a];
    }
  }

  // Marks the group of `owner` finished. Every subtree that becomes complete
  // is checked against its complete neighbours; returns false on an order
  // violation (counters are updated either way).
  bool close_group(NodeId owner, bool canonical) {
    bool ok = true;
    for (NodeId a = owner; a != kNoParent; a = parent_[a]) {
      if (--pending_[a] == 0 && canonical && ok) ok = check_neighbours(a);
    }
    return ok;
  }
  void reopen_group(NodeId owner) {
    for (NodeId a = owner; a != kNoParent; a = parent_[a]) ++pending_[a];
  }

  bool check_neighbours(NodeId v) const {
    const NodeId p = parent_[v];
    if (p == kNoParent) return true;
    const auto& sib = kids_[p];
    const auto it = std::find(sib.begin(), sib.end(), v);
    if (it != sib.begin() && pending_[*(it - 1)] == 0 && compare_partial(kids_, *(it - 1), v) < 0) return false;
    if (it + 1 != sib.end() && pending_[*(it + 1)] == 0 && compare_partial(kids_, v, *(it + 1)) < 0) return false;
    return true;
  }

  const BitString& bits_;
  std::size_t n_;
  std::size_t pos_ = 0;
  std::size_t group_ = 0;  // index into queue_ of the node whose children are being read
  std::uint32_t group_size_ = 0;
  std::vector<NodeId> parent_;
  std::vector<std::vector<NodeId>> kids_;
  std::vector<bool> internal_;
  std::vector<std::uint32_t> pending_;  // unfinished groups within each subtree
  std::vector<NodeId> queue_;           // internal nodes in breadth-first order
};

template <class Parser>
DecodedShape decode_with(Parser& parser) {
  std::unordered_set<std::uint64_t> dead;
  for (bool canonical : {true, false}) {
    parser.reset();
    if (search(parser, canonical, canonical ? kCanonicalSearchSteps : kSearchSteps, dead)) {
      return parser.result(canonical);
    }
  }
  throw DecodeError("malformed codeword");
}

DecodedShape single_node_shape() { return {OrderedTree(), {0}, true}; }

void check_node_count(std::size_t n) {
  if (n == 0 || n > kMaxNodes) throw DecodeError("node count out of range");
}

}  // namespace

std::vector<PcMove> pc_trace(const OrderedTree& tree) { return walk_pc(tree).moves; }
std::vector<TdMove> td_trace(const OrderedTree& tree) { return walk_td(tree).moves; }
std::vector<NodeId> pc_visit_order(const OrderedTree& tree) { return walk_pc(tree).visit_order; }
std::vector<NodeId> td_visit_order(const OrderedTree& tree) { return walk_td(tree).visit_order; }

BitString to_bits(std::span<const PcMove> moves) {
  BitString out;
  for (PcMove m : moves) {
    switch (m) {
      case PcMove::Climb: out.push_back(true); break;
      case PcMove::Fall: out.push_back(false); break;
      case PcMove::ClimbSeen:
        out.push_back(false);
        out.push_back(false);
        break;
    }
  }
  return out;
}

BitString to_bits(std::span<const TdMove> moves) {
  BitString out;
  for (TdMove m : moves) {
    switch (m) {
      case TdMove::Leaf: out.push_back(true); break;
      case TdMove::Tunnel: out.push_back(false); break;
      case TdMove::Internal:
        out.push_back(false);
        out.push_back(false);
        break;
    }
  }
  return out;
}

BitString encode_pc(const OrderedTree& tree) { return to_bits(walk_pc(tree).moves); }
BitString encode_td(const OrderedTree& tree) { return to_bits(walk_td(tree).moves); }

CodingMethod select_method(const TreeStats& s) {
  return 2 * s.leaves < s.n ? CodingMethod::PitClimbing : CodingMethod::TunnelDigging;
}

BitString encode_tree_explorer(const OrderedTree& tree) {
  BitString out;
  if (select_method(stats(tree)) == CodingMethod::PitClimbing) {
    out.push_back(false);
    out.append(encode_pc(tree));
  } else {
    out.push_back(true);
    out.append(encode_td(tree));
  }
  return out;
}

DecodedShape decode_pc_shape(const BitString& bits, std::size_t n) {
  check_node_count(n);
  // Ones are new-node climbs; zeros come in (fall, climb-seen) pairs of 0+00.
  const std::size_t ones = bits.count_ones();
  const std::size_t zeros = bits.size() - ones;
  if (zeros % 3 != 0 || 1 + ones + zeros / 3 != n) {
    throw DecodeError("pit-climbing codeword of length " + std::to_string(bits.size()) +
                      " cannot describe " + std::to_string(n) + " nodes");
  }
  if (n == 1) return single_node_shape();
  PcParser parser(bits, n);
  return decode_with(parser);
}

DecodedShape decode_td_shape(const BitString& bits, std::size_t n) {
  check_node_count(n);
  // Ones are leaves; every non-root internal node costs 00 plus one tunnel.
  const std::size_t ones = bits.count_ones();
  const std::size_t zeros = bits.size() - ones;
  if (zeros % 3 != 0 || 1 + ones + zeros / 3 != n) {
    throw DecodeError("tunnel-digging codeword of length " + std::to_string(bits.size()) +
                      " cannot describe " + std::to_string(n) + " nodes");
  }
  if (n == 1) return single_node_shape();
  TdParser parser(bits, n);
  return decode_with(parser);
}

Tree decode_pc(const BitString& bits, std::size_t n) { return Tree::canonicalize(decode_pc_shape(bits, n).shape); }
Tree decode_td(const BitString& bits, std::size_t n) { return Tree::canonicalize(decode_td_shape(bits, n).shape); }

Tree decode_tree_explorer(const BitString& bits, std::size_t n) {
  if (bits.empty()) throw DecodeError("empty TreeExplorer codeword");
  const BitString body = bits.slice(1, bits.size());
  return bits[0] ? decode_td(body, n) : decode_pc(body, n);
}

CodeLengths code_lengths(const TreeStats& s) {
  CodeLengths out;
  if (s.n >= 2) {
    out.pc = s.n + 2 * s.leaves - 3;
    out.td = 3 * s.n - 2 * s.leaves - 3;
  }
  out.te = std::min(out.pc, out.td) + 1;
  return out;
}

}  // namespace treecode
