#include <doctest.h>

#include <array>
#include <map>
#include <set>

#include "helpers.hpp"
#include "treecode/counting.hpp"

using namespace treecode;

namespace {

constexpr std::array<unsigned, 15> kCounts{0, 1, 1, 2, 4, 9, 20, 48, 115, 286, 719, 1842, 4766, 12486, 32973};

// Upper 0.1% point of chi-square with 19 degrees of freedom.
constexpr double kChi2Df19 = 43.820;

double chi_square(const std::map<std::vector<std::uint32_t>, std::size_t>& hist, std::size_t classes, std::size_t draws) {
  const double expected = static_cast<double>(draws) / static_cast<double>(classes);
  double chi = 0.0;
  for (const auto& [key, observed] : hist) {
    const double d = static_cast<double>(observed) - expected;
    chi += d * d / expected;
  }
  chi += static_cast<double>(classes - hist.size()) * expected;  // unseen classes
  return chi;
}

}  // namespace

TEST_CASE("counts match the known sequence") {
  for (std::size_t n = 1; n < kCounts.size(); ++n) CHECK(count_trees(n) == kCounts[n]);
  CHECK(count_trees(20) == 12826228);
  CHECK(count_trees(30) == BigInt("354426847597"));
  CHECK_THROWS(count_trees(0));
}

TEST_CASE("count table agrees with single lookups") {
  const RootedTreeCounts table(40);
  for (std::size_t n = 1; n <= 40; ++n) CHECK(table[n] == count_trees(n));
}

TEST_CASE("enumeration yields every canonical tree once") {
  std::size_t total = 0;
  for (std::size_t n = 1; n <= 14; ++n) {
    std::set<std::vector<std::uint32_t>> seen;
    std::vector<std::uint32_t> previous;
    std::size_t k = 0;
    for_each_tree(n, [&](const Tree& t) {
      const auto levels = t.level_sequence();
      REQUIRE(t.size() == n);
      REQUIRE(is_canonical(t.ordered()));
      if (k++ > 0) REQUIRE(levels < previous);  // strictly decreasing order
      previous = levels;
      seen.insert(levels);
      return true;
    });
    CHECK(seen.size() == kCounts[n]);
    CHECK(k == kCounts[n]);
    total += k;
  }
  CHECK(total == 53272);
}

TEST_CASE("enumeration examples") {
  const auto three = enumerate_trees(3);
  REQUIRE(three.size() == 2);
  CHECK(three[0] == testing::path(3));
  CHECK(three[1] == testing::star(3));
  CHECK(enumerate_trees(1).size() == 1);
  CHECK(enumerate_trees(6).size() == 20);
  CHECK_THROWS(enumerate_trees(0));
  CHECK_THROWS(enumerate_trees(kMaxEnumerationNodes + 1));
}

TEST_CASE("enumeration can stop early") {
  std::size_t visited = 0;
  for_each_tree(8, [&](const Tree&) { return ++visited < 5; });
  CHECK(visited == 5);
}

TEST_CASE("sampler on tiny sizes") {
  Rng rng(99);
  CHECK(sample_uniform(1, rng) == Tree{});
  CHECK(sample_uniform(2, rng) == testing::path(2));
  CHECK_THROWS(sample_uniform(0, rng));
}

TEST_CASE("sampler n=3 frequencies within three sigma") {
  Rng rng(2024);
  UniformTreeSampler sampler(3);
  std::size_t paths = 0;
  for (int i = 0; i < 10000; ++i) paths += sampler.sample(3, rng) == testing::path(3);
  CHECK(paths >= 4850);
  CHECK(paths <= 5150);
}

TEST_CASE("sampler n=6 passes chi-square for three seeds") {
  UniformTreeSampler sampler(6);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Rng rng(seed);
    std::map<std::vector<std::uint32_t>, std::size_t> hist;
    for (int i = 0; i < 20000; ++i) {
      const Tree t = sampler.sample(6, rng);
      REQUIRE(is_canonical(t.ordered()));
      ++hist[t.level_sequence()];
    }
    CHECK(hist.size() == 20);
    CHECK(chi_square(hist, 20, 20000) < kChi2Df19);
  }
}

TEST_CASE("sampler covers all trees at n=8 evenly") {
  UniformTreeSampler sampler(8);
  Rng rng(77);
  std::map<std::vector<std::uint32_t>, std::size_t> hist;
  const std::size_t draws = 115 * 400;
  for (std::size_t i = 0; i < draws; ++i) ++hist[sampler.sample(8, rng).level_sequence()];
  CHECK(hist.size() == 115);
  // Upper 0.1% point of chi-square with 114 degrees of freedom.
  CHECK(chi_square(hist, 115, draws) < 166.406);
}

TEST_CASE("sampler is deterministic for a seed") {
  UniformTreeSampler sampler(300);
  Rng a(5), b(5);
  for (int i = 0; i < 20; ++i) CHECK(sampler.sample(300, a) == sampler.sample(300, b));
  Rng c(5);
  Rng d(5);
  CHECK(sample_uniform(300, c) == sampler.sample(300, d));
}

TEST_CASE("sampler handles sizes past its cached tables") {
  UniformTreeSampler sampler(1200);
  Rng rng(8);
  const Tree t = sampler.sample(1200, rng);
  CHECK(t.size() == 1200);
  CHECK(is_canonical(t.ordered()));
  CHECK_THROWS(sampler.sample(1201, rng));
}

TEST_CASE("uniform_below stays in range and hits every value") {
  Rng rng(4);
  std::array<int, 7> hits{};
  for (int i = 0; i < 7000; ++i) {
    const BigInt v = uniform_below(7, rng);
    REQUIRE(v >= 0);
    REQUIRE(v < 7);
    ++hits[v.convert_to<std::size_t>()];
  }
  for (int h : hits) CHECK(h > 850);
  const BigInt big = count_trees(200);
  for (int i = 0; i < 100; ++i) CHECK(uniform_below(big, rng) < big);
}
