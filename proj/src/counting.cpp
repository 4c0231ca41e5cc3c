#include "treecode/counting.hpp"

#include <algorithm>
#include <stdexcept>

namespace treecode {

namespace {

constexpr std::size_t kCachedSplitTables = 512;

void require_positive(std::size_t n) {
  if (n == 0) throw std::invalid_argument("node count must be at least 1");
}

}  // namespace

RootedTreeCounts::RootedTreeCounts(std::size_t max_n) {
  require_positive(max_n);
  a_.assign(max_n + 1, BigInt(0));
  a_[1] = 1;
  // divisor_sum[k] = sum_{d|k} d*a(d), filled as a(d) becomes known.
  std::vector<BigInt> divisor_sum(max_n + 1, BigInt(0));
  for (std::size_t n = 1; n < max_n; ++n) {
    // a(n) is final here; fold it into every multiple of n.
    const BigInt term = BigInt(n) * a_[n];
    for (std::size_t k = n; k <= max_n; k += n) divisor_sum[k] += term;
    BigInt total = 0;
    for (std::size_t k = 1; k <= n; ++k) total += divisor_sum[k] * a_[n - k + 1];
    a_[n + 1] = total / n;
  }
}

TreeCount count_trees(std::size_t n) {
  require_positive(n);
  return RootedTreeCounts(n)[n];
}

void for_each_tree(std::size_t n, const std::function<bool(const Tree&)>& visit) {
  if (n == 0 || n > kMaxEnumerationNodes) {
    throw std::invalid_argument("enumeration supports 1 <= n <= " + std::to_string(kMaxEnumerationNodes));
  }
  // Beyer-Hedetniemi successor over canonical level sequences.
  std::vector<std::uint32_t> level(n);
  for (std::size_t i = 0; i < n; ++i) level[i] = static_cast<std::uint32_t>(i);
  for (;;) {
    if (!visit(Tree::from_canonical_level_sequence(level))) return;
    std::size_t p = n;
    for (std::size_t i = n; i-- > 1;) {
      if (level[i] >= 2) {
        p = i;
        break;
      }
    }
    if (p == n) return;
    std::size_t q = p;
    while (level[--q] != level[p] - 1) {
    }
    for (std::size_t i = p; i < n; ++i) level[i] = level[i - (p - q)];
  }
}

std::vector<Tree> enumerate_trees(std::size_t n) {
  std::vector<Tree> out;
  for_each_tree(n, [&](const Tree& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

BigInt uniform_below(const BigInt& bound, Rng& rng) {
  if (bound <= 0) throw std::invalid_argument("uniform_below: bound must be positive");
  const std::size_t bits = boost::multiprecision::msb(bound) + 1;
  const std::size_t words = (bits + 63) / 64;
  for (;;) {
    BigInt r = 0;
    for (std::size_t w = 0; w < words; ++w) {
      r <<= 64;
      r |= BigInt(rng());
    }
    r >>= words * 64 - bits;
    if (r < bound) return r;
  }
}

UniformTreeSampler::UniformTreeSampler(std::size_t max_n) : counts_(max_n) {
  const std::size_t cached = std::min(max_n, kCachedSplitTables);
  cumulative_.resize(cached + 1);
  for (std::size_t m = 2; m <= cached; ++m) {
    auto& row = cumulative_[m];
    row.reserve(m - 1);
    BigInt running = 0;
    for (std::size_t d = 1; d < m; ++d) {
      BigInt tail = 0;
      for (std::size_t jd = d; jd < m; jd += d) tail += counts_[m - jd];
      running += BigInt(d) * counts_[d] * tail;
      row.push_back(running);
    }
  }
}

UniformTreeSampler::Split UniformTreeSampler::choose_split(std::size_t m, Rng& rng) const {
  // (m-1)*a(m) = sum_{d>=1} sum_{j>=1, jd<m} d*a(d)*a(m-jd).
  BigInt pick = uniform_below(BigInt(m - 1) * counts_[m], rng);
  std::size_t d = 0;
  if (m < cumulative_.size()) {
    const auto& row = cumulative_[m];
    auto it = std::upper_bound(row.begin(), row.end(), pick);
    d = static_cast<std::size_t>(it - row.begin()) + 1;
    if (d > 1) pick -= row[d - 2];
  } else {
    for (d = 1; d < m; ++d) {
      BigInt tail = 0;
      for (std::size_t jd = d; jd < m; jd += d) tail += counts_[m - jd];
      BigInt weight = BigInt(d) * counts_[d] * tail;
      if (pick < weight) break;
      pick -= weight;
    }
  }
  const BigInt unit = BigInt(d) * counts_[d];
  for (std::size_t j = 1; j * d < m; ++j) {
    BigInt weight = unit * counts_[m - j * d];
    if (pick < weight) return {j, d};
    pick -= weight;
  }
  throw std::logic_error("uniform sampler: split weights do not sum to (m-1)*a(m)");
}

void UniformTreeSampler::grow(std::size_t m, Rng& rng, std::vector<std::vector<NodeId>>& children,
                              NodeId root) const {
  // The root of an m-node tree gets j identical copies of a random d-node
  // tree, then the remaining (m - j*d)-node tree is grown at the same root.
  while (m > 1) {
    const Split split = choose_split(m, rng);
    std::vector<std::vector<NodeId>> sub(1);
    grow(split.subtree_size, rng, sub, 0);
    for (std::size_t copy = 0; copy < split.copies; ++copy) {
      const NodeId base = static_cast<NodeId>(children.size());
      for (const auto& kids : sub) {
        auto& dst = children.emplace_back();
        for (NodeId k : kids) dst.push_back(base + k);
      }
      children[root].push_back(base);
    }
    m -= split.copies * split.subtree_size;
  }
}

Tree UniformTreeSampler::sample(std::size_t n, Rng& rng) const {
  require_positive(n);
  if (n > max_n()) throw std::invalid_argument("sampler table too small for n=" + std::to_string(n));
  std::vector<std::vector<NodeId>> children(1);
  grow(n, rng, children, 0);
  return Tree::canonicalize(OrderedTree::from_children(children, 0));
}

Tree sample_uniform(std::size_t n, Rng& rng) {
  require_positive(n);
  return UniformTreeSampler(n).sample(n, rng);
}

}  // namespace treecode
