#include "treecode/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "treecode/codec.hpp"
#include "treecode/newick.hpp"

namespace treecode {

namespace {

constexpr double kLog2DPrinted = 1.5635;
constexpr double kLog2CPrinted = -1.1846;
constexpr double kLog2D = 1.5635317110705585;
constexpr double kLog2C = -1.1846737442152342;

double asymptotic(std::size_t n, double log2_d, double log2_c) {
  const double x = static_cast<double>(n);
  return log2_d * x - 1.5 * std::log2(x) + log2_c;
}

struct Totals {
  std::size_t count = 0;
  std::uint64_t te = 0;
  std::uint64_t pc = 0;
  std::uint64_t td = 0;
  std::uint64_t newick = 0;
  std::uint64_t labeled_te = 0;

  void add(const Tree& tree) {
    const TreeStats s = stats(tree);
    const std::size_t label_bits = s.n * ceil_log2(s.n);
    const std::size_t te_bits = encode_tree_explorer(tree).size();
    ++count;
    te += te_bits;
    pc += encode_pc(tree).size();
    td += encode_td(tree).size();
    newick += newick_bit_length(s);
    labeled_te += te_bits + label_bits;
  }
};

double mean(std::uint64_t total, std::size_t count) {
  return static_cast<double>(total) / static_cast<double>(count);
}

BenchmarkRow make_row(std::size_t n, const BenchmarkOptions& opt, const UniformTreeSampler& sampler) {
  const BigInt& a = sampler.counts()[n];
  Totals t;
  if (a <= opt.exhaustive_limit) {
    for_each_tree(n, [&](const Tree& tree) {
      t.add(tree);
      return true;
    });
  } else {
    Rng rng = benchmark_rng(opt.master_seed, n);
    for (std::size_t i = 0; i < opt.samples_per_n; ++i) t.add(sampler.sample(n, rng));
  }
  BenchmarkRow row;
  row.n = n;
  row.sample_count = t.count;
  row.avg_te_bits = mean(t.te, t.count);
  row.avg_pc_bits = mean(t.pc, t.count);
  row.avg_td_bits = mean(t.td, t.count);
  row.exact_entropy_bits = log2_big(a);
  row.asymptotic_entropy_bits = uniform_entropy_asymptotic(n);
  row.adjacency_bits = adjacency_list_bits(n);
  row.avg_newick_bits = mean(t.newick, t.count);
  row.avg_labeled_te_bits = mean(t.labeled_te, t.count);
  return row;
}

}  // namespace

double log2_big(const BigInt& value) {
  if (value <= 0) throw std::domain_error("log2 of a non-positive value");
  const std::size_t top = boost::multiprecision::msb(value);
  if (top < 53) return std::log2(value.convert_to<double>());
  const std::size_t shift = top - 52;
  const auto mantissa = static_cast<BigInt>(value >> shift).convert_to<std::uint64_t>();
  return std::log2(static_cast<double>(mantissa)) + static_cast<double>(shift);
}

double uniform_entropy_exact(std::size_t n) { return log2_big(count_trees(n)); }

double uniform_entropy_asymptotic(std::size_t n) { return asymptotic(n, kLog2DPrinted, kLog2CPrinted); }

double uniform_entropy_asymptotic_precise(std::size_t n) { return asymptotic(n, kLog2D, kLog2C); }

EntropyReport entropy_report(std::size_t n) {
  return {n, uniform_entropy_exact(n), uniform_entropy_asymptotic(n)};
}

TreeCount ordered_rooted_count(std::size_t n) {
  if (n == 0) throw std::invalid_argument("node count must be at least 1");
  TreeCount c = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) c = c * (2 * (2 * k + 1)) / (k + 2);
  return c;
}

TreeCount labeled_tree_count(std::size_t n) {
  if (n == 0) throw std::invalid_argument("node count must be at least 1");
  if (n <= 2) return 1;
  return boost::multiprecision::pow(TreeCount(n), static_cast<unsigned>(n - 2));
}

unsigned ceil_log2(std::size_t n) {
  if (n == 0) throw std::invalid_argument("ceil_log2 of zero");
  return static_cast<unsigned>(std::bit_width(n - 1));
}

std::size_t adjacency_list_bits(std::size_t n) { return 2 * n * ceil_log2(n); }

std::size_t labeled_te_bits(const Tree& tree) {
  return encode_tree_explorer(tree).size() + tree.size() * ceil_log2(tree.size());
}

Rng benchmark_rng(std::uint64_t master_seed, std::size_t n) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(static_cast<std::uint64_t>(n) >> 32)};
  return Rng(seq);
}

std::vector<BenchmarkRow> run_benchmark(const BenchmarkOptions& opt) {
  if (opt.n_min < 1 || opt.n_min > opt.n_max || opt.n_max > kMaxBenchmarkNodes) {
    throw std::invalid_argument("benchmark range must satisfy 1 <= n_min <= n_max <= " +
                                std::to_string(kMaxBenchmarkNodes));
  }
  if (opt.samples_per_n == 0) throw std::invalid_argument("samples per n must be at least 1");

  const UniformTreeSampler sampler(opt.n_max);
  const std::size_t count = opt.n_max - opt.n_min + 1;
  std::vector<BenchmarkRow> rows(count);

  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) rows[i] = make_row(opt.n_min + i, opt, sampler);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 1; i < count; ++i) rows[i].te_rate_of_change = rows[i].avg_te_bits - rows[i - 1].avg_te_bits;
  return rows;
}

void write_benchmark_csv(std::ostream& out, std::span<const BenchmarkRow> rows) {
  out << "n,sample_count,avg_te_bits,avg_pc_bits,avg_td_bits,exact_entropy_bits,asymptotic_entropy_bits,"
         "adjacency_bits,avg_newick_bits,avg_labeled_te_bits,te_rate_of_change\n";
  char buf[64];
  auto real = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return std::string(buf);
  };
  for (const BenchmarkRow& r : rows) {
    out << r.n << ',' << r.sample_count << ',' << real(r.avg_te_bits) << ',' << real(r.avg_pc_bits) << ','
        << real(r.avg_td_bits) << ',' << real(r.exact_entropy_bits) << ',' << real(r.asymptotic_entropy_bits) << ','
        << r.adjacency_bits << ',' << real(r.avg_newick_bits) << ',' << real(r.avg_labeled_te_bits) << ','
        << (r.te_rate_of_change ? real(*r.te_rate_of_change) : std::string()) << '\n';
  }
}

}  // namespace treecode
