#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "treecode/tree.hpp"

namespace treecode {

using BigInt = boost::multiprecision::cpp_int;
using TreeCount = BigInt;
using Rng = std::mt19937_64;

// Table of a(1..max_n), the number of unlabeled rooted trees (A000081),
// from the Euler-transform recurrence
//   a(n+1) = (1/n) * sum_{k=1..n} (sum_{d|k} d*a(d)) * a(n-k+1).
class RootedTreeCounts {
 public:
  explicit RootedTreeCounts(std::size_t max_n);

  std::size_t max_n() const { return a_.size() - 1; }
  const BigInt& operator[](std::size_t n) const { return a_.at(n); }

 private:
  std::vector<BigInt> a_;  // a_[0] unused (0)
};

TreeCount count_trees(std::size_t n);

inline constexpr std::size_t kMaxEnumerationNodes = 16;

// Visits every canonical tree with n nodes once, in reverse lexicographic
// order of level sequences (path first, star last). Returning false from the
// callback stops the walk.
void for_each_tree(std::size_t n, const std::function<bool(const Tree&)>& visit);
std::vector<Tree> enumerate_trees(std::size_t n);

// Exact uniform sampler over unlabeled rooted trees with n nodes
// (Nijenhuis-Wilf recursive decomposition). Immutable after construction,
// so one instance may be shared by concurrent callers with their own Rng.
class UniformTreeSampler {
 public:
  explicit UniformTreeSampler(std::size_t max_n);

  std::size_t max_n() const { return counts_.max_n(); }
  const RootedTreeCounts& counts() const { return counts_; }

  Tree sample(std::size_t n, Rng& rng) const;

 private:
  struct Split {
    std::size_t copies;
    std::size_t subtree_size;
  };
  Split choose_split(std::size_t m, Rng& rng) const;
  void grow(std::size_t m, Rng& rng, std::vector<std::vector<NodeId>>& children, NodeId root) const;

  RootedTreeCounts counts_;
  // cumulative_[m][d-1] = sum_{d'<=d} d'*a(d')*sum_j a(m - j*d'), cached for small m.
  std::vector<std::vector<BigInt>> cumulative_;
};

Tree sample_uniform(std::size_t n, Rng& rng);

// Uniform integer in [0, bound) drawn from whole 64-bit words of rng.
BigInt uniform_below(const BigInt& bound, Rng& rng);

}  // namespace treecode
