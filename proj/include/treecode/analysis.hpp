#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "treecode/counting.hpp"
#include "treecode/tree.hpp"

namespace treecode {

// log2 of a positive big integer, accurate to double precision.
double log2_big(const BigInt& value);

// Entropy of the uniform source over unlabeled rooted trees: log2 a(n).
double uniform_entropy_exact(std::size_t n);

// 1.5635 n - 1.5 log2 n - 1.1846, with the coefficients rounded to four
// decimals.
double uniform_entropy_asymptotic(std::size_t n);

// Same expansion with log2 d and log2 c to double precision
// (d = 2.9557652856..., c = 0.4399240125...).
double uniform_entropy_asymptotic_precise(std::size_t n);

struct EntropyReport {
  std::size_t n = 1;
  double exact_bits = 0.0;
  double asymptotic_bits = 0.0;
};
EntropyReport entropy_report(std::size_t n);

// Ordered rooted trees with n nodes: Catalan(n-1).
TreeCount ordered_rooted_count(std::size_t n);
// Labeled unrooted trees on n nodes: n^(n-2), and 1 for n <= 2.
TreeCount labeled_tree_count(std::size_t n);

// ceil(log2 n) for n >= 1.
unsigned ceil_log2(std::size_t n);

// 2 n ceil(log2 n).
std::size_t adjacency_list_bits(std::size_t n);
// TreeExplorer structure bits plus n ceil(log2 n) bits of labels.
std::size_t labeled_te_bits(const Tree& tree);

struct BenchmarkRow {
  std::size_t n = 0;
  std::size_t sample_count = 0;
  double avg_te_bits = 0.0;
  double avg_pc_bits = 0.0;
  double avg_td_bits = 0.0;
  double exact_entropy_bits = 0.0;
  double asymptotic_entropy_bits = 0.0;
  std::size_t adjacency_bits = 0;
  double avg_newick_bits = 0.0;
  double avg_labeled_te_bits = 0.0;
  std::optional<double> te_rate_of_change;  // empty for the first row
};

struct BenchmarkOptions {
  std::size_t n_min = 1;
  std::size_t n_max = 1;
  std::size_t samples_per_n = 1;
  std::uint64_t master_seed = 0;
  // Average over every tree instead of sampling when a(n) is at most this.
  std::size_t exhaustive_limit = 10000;
  // 0 picks the hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
};

inline constexpr std::size_t kMaxBenchmarkNodes = 200;

// Seed of the generator used for the samples at node count n.
Rng benchmark_rng(std::uint64_t master_seed, std::size_t n);

// Throws std::invalid_argument on an invalid range or zero samples.
std::vector<BenchmarkRow> run_benchmark(const BenchmarkOptions& options);

void write_benchmark_csv(std::ostream& out, std::span<const BenchmarkRow> rows);

}  // namespace treecode
