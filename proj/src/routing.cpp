#include "treecode/routing.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "treecode/analysis.hpp"
#include "treecode/codec.hpp"

namespace treecode {

namespace {

std::vector<NodeId> label_visit_order(const OrderedTree& shape) {
  return select_method(stats(shape)) == CodingMethod::PitClimbing ? pc_visit_order(shape) : td_visit_order(shape);
}

std::string label_text(Label l) { return std::to_string(l); }

}  // namespace

LabeledTree LabeledTree::make(const OrderedTree& shape, std::span<const Label> labels) {
  const std::size_t n = shape.size();
  if (labels.size() != n) {
    throw RoutingError("expected " + std::to_string(n) + " labels, got " + std::to_string(labels.size()));
  }
  std::vector<bool> used(n, false);
  for (Label l : labels) {
    if (l >= n) throw RoutingError("label " + label_text(l) + " outside [0, " + std::to_string(n) + ")");
    if (used[l]) throw RoutingError("duplicate label " + label_text(l));
    used[l] = true;
  }

  // Sort siblings by label first; canonicalization is stable, so identical
  // subtrees stay in label order.
  std::vector<std::vector<NodeId>> children(n);
  for (NodeId v = 0; v < n; ++v) {
    auto kids = shape.children(v);
    children[v].assign(kids.begin(), kids.end());
    std::sort(children[v].begin(), children[v].end(), [&](NodeId a, NodeId b) { return labels[a] < labels[b]; });
  }
  std::vector<NodeId> to_pre;
  const OrderedTree by_label = OrderedTree::from_children(children, 0, &to_pre);
  std::vector<NodeId> perm;
  Tree tree = Tree::canonicalize(by_label, &perm);
  std::vector<Label> out(n);
  for (NodeId v = 0; v < n; ++v) out[perm[to_pre[v]]] = labels[v];
  return LabeledTree(std::move(tree), std::move(out));
}

LabeledTree random_labeling(const Tree& tree, Rng& rng) {
  std::vector<Label> labels(tree.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<Label>(i);
  for (std::size_t i = labels.size(); i > 1; --i) {
    const auto j = uniform_below(BigInt(i), rng).convert_to<std::size_t>();
    std::swap(labels[i - 1], labels[j]);
  }
  return LabeledTree::make(tree.ordered(), labels);
}

LabeledTree table_from_paths(const PathVectorTable& table) {
  std::unordered_map<Label, Label> parent;
  std::unordered_set<Label> destinations;
  std::unordered_set<Label> all{table.source};
  for (const Route& r : table.routes) {
    const std::string where = "route to " + label_text(r.destination);
    if (r.hops.empty() || r.hops.front() != table.source) throw RoutingError(where + " does not start at the source");
    if (r.hops.back() != r.destination) throw RoutingError(where + " does not end at its destination");
    if (r.destination == table.source) throw RoutingError(where + " targets the source");
    if (!destinations.insert(r.destination).second) throw RoutingError("duplicate destination " + label_text(r.destination));
    std::unordered_set<Label> seen;
    for (std::size_t k = 0; k < r.hops.size(); ++k) {
      const Label v = r.hops[k];
      if (!seen.insert(v).second) throw RoutingError(where + " revisits " + label_text(v));
      all.insert(v);
      if (k == 0) continue;
      auto [it, inserted] = parent.emplace(v, r.hops[k - 1]);
      if (!inserted && it->second != r.hops[k - 1]) {
        throw RoutingError(where + " reaches " + label_text(v) + " via " + label_text(r.hops[k - 1]) +
                           ", another route via " + label_text(it->second));
      }
    }
  }

  const std::size_t n = all.size();
  if (n > kMaxNodes) throw RoutingError("table has more than " + std::to_string(kMaxNodes) + " labels");
  for (Label l : all) {
    if (l >= n) throw RoutingError("labels are not the dense range [0, " + std::to_string(n) + "): found " + label_text(l));
  }

  std::vector<std::vector<NodeId>> children(n);
  for (auto [v, p] : parent) children[p].push_back(v);
  std::vector<NodeId> to_pre;
  const OrderedTree shape = OrderedTree::from_children(children, table.source, &to_pre);
  std::vector<Label> labels(n);
  for (Label v = 0; v < n; ++v) labels[to_pre[v]] = v;
  return LabeledTree::make(shape, labels);
}

PathVectorTable tree_to_table(const LabeledTree& lt) {
  const Tree& t = lt.tree();
  PathVectorTable table;
  table.source = lt.label(0);
  std::vector<std::vector<Label>> path(t.size());
  path[0] = {lt.label(0)};
  table.routes.reserve(t.size() - 1);
  for (NodeId v = 1; v < t.size(); ++v) {
    path[v] = path[t.parent(v)];
    path[v].push_back(lt.label(v));
    table.routes.push_back({lt.label(v), path[v]});
  }
  std::sort(table.routes.begin(), table.routes.end(),
            [](const Route& a, const Route& b) { return a.destination < b.destination; });
  return table;
}

unsigned label_width(std::size_t n) { return std::max(1u, ceil_log2(n)); }

std::vector<std::uint8_t> encode_packet(const LabeledTree& lt, bool include_labels) {
  const OrderedTree& shape = lt.tree().ordered();
  const std::size_t n = shape.size();
  if (n > kMaxNodes) throw PacketError("tree too large for a packet");
  BitWriter w;
  w.put_uint(include_labels ? kPacketLabeled : kPacketStructureOnly, 8);
  w.put_uint(n, 16);
  w.put(encode_tree_explorer(shape));
  if (include_labels) {
    const unsigned width = label_width(n);
    for (NodeId v : label_visit_order(shape)) w.put_uint(lt.label(v), width);
  }
  return std::move(w).finish();
}

std::vector<std::uint8_t> encode_packet(const Tree& tree) {
  std::vector<Label> labels(tree.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<Label>(i);
  return encode_packet(LabeledTree::make(tree.ordered(), labels), false);
}

PacketContents decode_packet(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPacketHeaderBytes) throw PacketError("truncated header");
  const std::uint8_t flags = bytes[0];
  if ((flags >> 4) != 1) throw PacketError("unsupported packet version " + std::to_string(flags >> 4));
  if ((flags & 0x0E) != 0) throw PacketError("unknown flag bits set");
  const bool has_labels = (flags & 0x01) != 0;
  const std::size_t n = (std::size_t{bytes[1]} << 8) | bytes[2];
  if (n == 0) throw PacketError("node count is zero");

  BitReader r(bytes.subspan(kPacketHeaderBytes));
  try {
    const bool td = r.get();
    // Every 1 accounts for one node and every 0 for a third of one, so the
    // structure code ends where the count reaches n - 1.
    const std::size_t target = 3 * (n - 1);
    std::size_t weight = 0;
    BitString code;
    while (weight < target) {
      const bool bit = r.get();
      code.push_back(bit);
      weight += bit ? 3 : 1;
    }
    if (weight != target) throw PacketError("structure code does not describe " + std::to_string(n) + " nodes");

    DecodedShape decoded;
    try {
      decoded = td ? decode_td_shape(code, n) : decode_pc_shape(code, n);
    } catch (const DecodeError& e) {
      throw PacketError(std::string("structure: ") + e.what());
    }

    PacketContents out{Tree::canonicalize(decoded.shape), std::nullopt};
    if (has_labels) {
      const unsigned width = label_width(n);
      std::vector<Label> labels(n);
      std::vector<bool> used(n, false);
      for (NodeId v : decoded.visit_order) {
        const auto l = static_cast<Label>(r.get_uint(width));
        if (l >= n) throw PacketError("label " + label_text(l) + " outside [0, " + std::to_string(n) + ")");
        if (used[l]) throw PacketError("duplicate label " + label_text(l));
        used[l] = true;
        labels[v] = l;
      }
      out.labeled = LabeledTree::make(decoded.shape, labels);
    }
    if (r.remaining() >= 8) throw PacketError("trailing bytes after body");
    while (r.remaining() > 0) {
      if (r.get()) throw PacketError("nonzero padding");
    }
    return out;
  } catch (const std::out_of_range&) {
    throw PacketError("truncated body");
  }
}

std::size_t baseline_path_vector_bits(const PathVectorTable& table) {
  std::unordered_set<Label> all{table.source};
  std::size_t hops = 0;
  for (const Route& r : table.routes) {
    all.insert(r.hops.begin(), r.hops.end());
    hops += r.hops.size();
  }
  return hops * label_width(all.size());
}

PathVectorTable read_route_list(std::istream& in) {
  PathVectorTable table;
  bool have_source = false;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    const std::string where = "line " + std::to_string(line_no) + ": ";
    std::istringstream fields(line);
    std::vector<Label> values;
    std::string token;
    bool first = true;
    while (fields >> token) {
      if (first && token[0] == '#') break;
      if (first && !have_source) {
        if (token != "source") throw RoutingError(where + "expected \"source <label>\"");
        first = false;
        continue;
      }
      first = false;
      Label v = 0;
      auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc() || end != token.data() + token.size()) {
        throw RoutingError(where + "invalid label \"" + token + "\"");
      }
      values.push_back(v);
    }
    if (first) continue;  // blank or comment
    if (!have_source) {
      if (values.size() != 1) throw RoutingError(where + "expected \"source <label>\"");
      table.source = values[0];
      have_source = true;
      continue;
    }
    table.routes.push_back({values.back(), std::move(values)});
  }
  if (!have_source) throw RoutingError("missing \"source <label>\" line");
  return table;
}

void write_route_list(std::ostream& out, const PathVectorTable& table) {
  out << "source " << table.source << '\n';
  for (const Route& r : table.routes) {
    for (std::size_t k = 0; k < r.hops.size(); ++k) out << (k ? " " : "") << r.hops[k];
    out << '\n';
  }
}

}  // namespace treecode
