#include "treecode/newick.hpp"

#include <cctype>
#include <limits>

namespace treecode {

std::string emit_newick(const OrderedTree& tree, std::span<const Label> labels) {
  if (!labels.empty() && labels.size() != tree.size()) {
    throw TreeError("label count " + std::to_string(labels.size()) + " does not match node count " +
                    std::to_string(tree.size()));
  }
  std::string out;
  out.reserve(tree.size() * 2 + 1);
  auto put_label = [&](NodeId v) {
    if (!labels.empty()) out += std::to_string(labels[v]);
  };
  // (node, index of next child to open)
  std::vector<std::pair<NodeId, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    const auto kids = tree.children(v);
    if (kids.empty()) {
      put_label(v);
      stack.pop_back();
      continue;
    }
    if (next == kids.size()) {
      out += ')';
      put_label(v);
      stack.pop_back();
      continue;
    }
    out += next == 0 ? '(' : ',';
    const NodeId child = kids[next++];
    stack.emplace_back(child, 0);
  }
  out += ';';
  return out;
}

namespace {

class NewickParser {
 public:
  explicit NewickParser(std::string_view text) : text_(text) {}

  NewickTree parse() {
    std::vector<NodeId> open;  // nodes whose '(' is not yet closed
    NodeId cur = new_node(kNoParent);
    for (;;) {
      // Start of the subtree rooted at `cur`.
      if (peek() == '(') {
        ++pos_;
        open.push_back(cur);
        cur = new_node(cur);
        continue;
      }
      read_label(cur);
      // After a complete subtree.
      for (;;) {
        if (open.empty()) {
          finish();
          return build();
        }
        const char c = peek();
        if (c == ',') {
          ++pos_;
          cur = new_node(open.back());
          break;
        }
        if (c == ')') {
          ++pos_;
          cur = open.back();
          open.pop_back();
          read_label(cur);
          continue;
        }
        if (c == '\0' || c == ';') throw NewickError("unbalanced parentheses", pos_);
        throw NewickError(std::string("unexpected character '") + c + "'", pos_);
      }
    }
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  NodeId new_node(NodeId parent) {
    if (children_.size() >= kMaxNodes) throw NewickError("too many nodes", pos_);
    const auto id = static_cast<NodeId>(children_.size());
    children_.emplace_back();
    labels_.emplace_back();
    label_pos_.push_back(pos_);
    if (parent != kNoParent) children_[parent].push_back(id);
    return id;
  }

  void read_label(NodeId v) {
    const std::size_t start = pos_;
    std::uint64_t value = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + static_cast<std::uint64_t>(peek() - '0');
      if (value > std::numeric_limits<Label>::max()) throw NewickError("label too large", start);
      ++pos_;
    }
    if (pos_ > start) {
      labels_[v] = static_cast<Label>(value);
      ++labelled_;
    }
    label_pos_[v] = start;
  }

  void finish() {
    if (peek() == ')') throw NewickError("unbalanced parentheses", pos_);
    if (peek() != ';') throw NewickError("missing ';' terminator", pos_);
    ++pos_;
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ != text_.size()) throw NewickError("trailing characters after ';'", pos_);
  }

  NewickTree build() {
    if (labelled_ != 0 && labelled_ != children_.size()) {
      for (std::size_t v = 0; v < labels_.size(); ++v) {
        if (!labels_[v]) throw NewickError("node without label in labeled tree", label_pos_[v]);
      }
    }
    std::vector<NodeId> to_preorder, to_canonical;
    const OrderedTree shape = OrderedTree::from_children(children_, 0, &to_preorder);
    NewickTree out{Tree::canonicalize(shape, &to_canonical), std::nullopt};
    if (labelled_ != 0) {
      std::vector<Label> labels(children_.size());
      for (std::size_t v = 0; v < children_.size(); ++v) labels[to_canonical[to_preorder[v]]] = *labels_[v];
      out.labels = std::move(labels);
    }
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::vector<NodeId>> children_;
  std::vector<std::optional<Label>> labels_;
  std::vector<std::size_t> label_pos_;
  std::size_t labelled_ = 0;
};

}  // namespace

NewickTree parse_newick(std::string_view text) { return NewickParser(text).parse(); }

std::size_t newick_bit_length(const TreeStats& stats) { return 4 * stats.n - 2 * stats.leaves - 1; }

}  // namespace treecode
