#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "treecode/analysis.hpp"
#include "treecode/codec.hpp"
#include "treecode/counting.hpp"
#include "treecode/routing.hpp"

using namespace treecode;

namespace {

using Bytes = std::vector<std::uint8_t>;

PathVectorTable table(Label source, std::vector<std::vector<Label>> paths) {
  PathVectorTable t{source, {}};
  for (auto& p : paths) t.routes.push_back({p.back(), std::move(p)});
  return t;
}

LabeledTree labeled(const std::string& newick) {
  const NewickTree parsed = parse_newick(newick);
  return LabeledTree::make(parsed.tree.ordered(), *parsed.labels);
}

std::string routing_error(const PathVectorTable& t) {
  try {
    table_from_paths(t);
  } catch (const RoutingError& e) {
    return e.what();
  }
  return "";
}

std::string packet_error(const Bytes& bytes) {
  try {
    decode_packet(bytes);
  } catch (const PacketError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("tables become trees rooted at the source") {
  const LabeledTree chain = table_from_paths(table(0, {{0, 1}, {0, 1, 2}}));
  CHECK(chain.tree() == testing::path(3));
  CHECK(std::vector<Label>(chain.labels().begin(), chain.labels().end()) == std::vector<Label>{0, 1, 2});

  const LabeledTree star = table_from_paths(table(0, {{0, 1}, {0, 2}}));
  CHECK(star.tree() == testing::star(3));
  CHECK(star == labeled("(1,2)0;"));

  // Intermediate hops need no route of their own.
  CHECK(table_from_paths(table(0, {{0, 1, 2}})) == chain);
  CHECK(table_from_paths(table(0, {})) == LabeledTree{});
  CHECK(routing_error(table(2, {})).find("dense") != std::string::npos);
}

TEST_CASE("table errors") {
  CHECK(routing_error(table(0, {{0, 1, 2}, {0, 2}})).find("duplicate destination") != std::string::npos);
  CHECK(routing_error(table(0, {{1, 2}})).find("does not start at the source") != std::string::npos);
  CHECK(routing_error(table(0, {{0, 1, 2}, {0, 2, 3}})).find("another route") != std::string::npos);
  CHECK(routing_error(table(0, {{0, 1, 2, 1, 3}})).find("revisits") != std::string::npos);
  CHECK(routing_error(table(0, {{0, 1}, {0, 1, 0}})).find("targets the source") != std::string::npos);
  CHECK(routing_error(table(0, {{0, 5}})).find("dense") != std::string::npos);
  PathVectorTable wrong_end = table(0, {{0, 1}});
  wrong_end.routes[0].destination = 2;
  CHECK(routing_error(wrong_end).find("does not end") != std::string::npos);
  PathVectorTable empty_route{0, {{1, {}}}};
  CHECK(routing_error(empty_route).find("does not start") != std::string::npos);
}

TEST_CASE("trees become tables") {
  const PathVectorTable chain = tree_to_table(labeled("((2)1)0;"));
  CHECK(chain == table(0, {{0, 1}, {0, 1, 2}}));
  CHECK(tree_to_table(LabeledTree{}) == PathVectorTable{0, {}});
  CHECK(tree_to_table(labeled("(1,2)0;")) == table(0, {{0, 1}, {0, 2}}));
}

TEST_CASE("labeled trees are canonical up to label-preserving isomorphism") {
  CHECK(labeled("(2,1)0;") == labeled("(1,2)0;"));
  CHECK(labeled("((4)3,(2)1)0;") == labeled("((2)1,(4)3)0;"));
  CHECK(labeled("((4)3,(2)1)0;") != labeled("((4)1,(2)3)0;"));
  CHECK(labeled("(1,(3)2)0;").labels()[1] == 2);  // chain before leaf
  const Label dup[] = {0, 1, 1};
  CHECK_THROWS_AS(LabeledTree::make(testing::star(3).ordered(), dup), RoutingError);
  const Label out_of_range[] = {0, 1, 3};
  CHECK_THROWS_AS(LabeledTree::make(testing::star(3).ordered(), out_of_range), RoutingError);
  const Label short_list[] = {0, 1};
  CHECK_THROWS_AS(LabeledTree::make(testing::star(3).ordered(), short_list), RoutingError);
}

TEST_CASE("table conversion round trip on random labeled trees") {
  UniformTreeSampler sampler(500);
  Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + uniform_below(500, rng).convert_to<std::size_t>();
    const LabeledTree lt = random_labeling(sampler.sample(n, rng), rng);
    const PathVectorTable t = tree_to_table(lt);
    REQUIRE(t.routes.size() == n - 1);
    REQUIRE(table_from_paths(t) == lt);
  }
}

TEST_CASE("golden packets") {
  const LabeledTree chain2 = labeled("(0)1;");
  CHECK(encode_packet(chain2, true) == Bytes{0x11, 0x00, 0x02, 0xE0});
  CHECK(encode_packet(labeled("0;"), true) == Bytes{0x11, 0x00, 0x01, 0x80});
  CHECK(encode_packet(chain2, false) == Bytes{0x10, 0x00, 0x02, 0xC0});
  CHECK(encode_packet(testing::star(3)) == Bytes{0x10, 0x00, 0x03, 0xE0});
  // Path of three: method 0, PC "11", then labels 0, 1, 2 at two bits each
  // in visit order (leaf, middle, root).
  CHECK(encode_packet(labeled("((0)1)2;"), true) == Bytes{0x11, 0x00, 0x03, 0x63, 0x00});
}

TEST_CASE("golden packets decode") {
  const PacketContents chain = decode_packet(Bytes{0x11, 0x00, 0x02, 0xE0});
  REQUIRE(chain.labeled.has_value());
  CHECK(*chain.labeled == labeled("(0)1;"));
  CHECK(chain.structure == testing::path(2));

  const PacketContents star = decode_packet(Bytes{0x10, 0x00, 0x03, 0xE0});
  CHECK_FALSE(star.labeled.has_value());
  CHECK(star.structure == testing::star(3));

  CHECK(*decode_packet(Bytes{0x11, 0x00, 0x03, 0x63, 0x00}).labeled == labeled("((0)1)2;"));
}

TEST_CASE("malformed packets") {
  CHECK(packet_error({0x11, 0x00, 0x02, 0xE1}).find("nonzero padding") != std::string::npos);
  CHECK(packet_error({0x21, 0x00, 0x02, 0xE0}).find("version") != std::string::npos);
  CHECK(packet_error({0x13, 0x00, 0x02, 0xE0}).find("flag") != std::string::npos);
  CHECK(packet_error({0x11, 0x00}).find("truncated") != std::string::npos);
  CHECK(packet_error({0x11, 0x00, 0x05}).find("truncated") != std::string::npos);
  CHECK(packet_error({0x11, 0x00, 0x05, 0x80}).find("truncated") != std::string::npos);
  CHECK(packet_error({0x11, 0x00, 0x00, 0x80}).find("zero") != std::string::npos);
  CHECK(packet_error({0x11, 0x00, 0x02, 0xF0}).find("duplicate label") != std::string::npos);
  CHECK(packet_error({0x11, 0x00, 0x03, 0x7C}).find("outside") != std::string::npos);
  CHECK(packet_error({0x11, 0x00, 0x02, 0xE0, 0x00}).find("trailing") != std::string::npos);
  // Structure weight overshoots: method 1 then "0" and "1" reach 4 > 3.
  CHECK(packet_error({0x10, 0x00, 0x02, 0xA0}).find("structure") != std::string::npos);
  // Right weight, but a PC code never starts with 0.
  CHECK(packet_error({0x10, 0x00, 0x03, 0x00}).find("structure") != std::string::npos);
}

TEST_CASE("small packets round trip exactly") {
  Rng rng(5);
  for (std::size_t n = 1; n <= 5; ++n) {
    for_each_tree(n, [&](const Tree& t) {
      for (int k = 0; k < 4; ++k) {
        const LabeledTree lt = random_labeling(t, rng);
        const PacketContents full = decode_packet(encode_packet(lt, true));
        REQUIRE(full.labeled.has_value());
        REQUIRE(*full.labeled == lt);
        const PacketContents bare = decode_packet(encode_packet(lt, false));
        REQUIRE_FALSE(bare.labeled.has_value());
        REQUIRE(bare.structure == t);
      }
      return true;
    });
  }
}

TEST_CASE("packet sizes") {
  UniformTreeSampler sampler(300);
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + uniform_below(300, rng).convert_to<std::size_t>();
    const LabeledTree lt = random_labeling(sampler.sample(n, rng), rng);
    const std::size_t te = encode_tree_explorer(lt.tree()).size();
    const std::size_t labels = n * label_width(n);
    CHECK(encode_packet(lt, true).size() == kPacketHeaderBytes + (te + labels + 7) / 8);
    CHECK(encode_packet(lt, false).size() == kPacketHeaderBytes + (te + 7) / 8);
    // Encoder output always parses back to n labeled nodes.
    const PacketContents back = decode_packet(encode_packet(lt, true));
    REQUIRE(back.labeled.has_value());
    CHECK(back.labeled->size() == n);
    CHECK(back.structure.size() == n);
  }
}

TEST_CASE("label width") {
  CHECK(label_width(1) == 1);
  CHECK(label_width(2) == 1);
  CHECK(label_width(3) == 2);
  CHECK(label_width(500) == 9);
  CHECK(label_width(65535) == 16);
}

TEST_CASE("baseline path-vector cost") {
  CHECK(baseline_path_vector_bits(table(0, {{0, 1}, {0, 1, 2}})) == 10);
  CHECK(baseline_path_vector_bits(PathVectorTable{0, {}}) == 0);
  CHECK(baseline_path_vector_bits(table(0, {{0, 1}, {0, 2}, {0, 3}, {0, 4}})) == 24);
}

TEST_CASE("packets are smaller than per-destination messages from ten nodes up") {
  UniformTreeSampler sampler(120);
  Rng rng(23);
  for (std::size_t n : {10u, 30u, 120u}) {
    for (int i = 0; i < 100; ++i) {
      const LabeledTree lt = random_labeling(sampler.sample(n, rng), rng);
      const std::size_t body = (encode_packet(lt, true).size() - kPacketHeaderBytes) * 8;
      REQUIRE(body < baseline_path_vector_bits(tree_to_table(lt)));
    }
  }
}

TEST_CASE("route list text") {
  std::istringstream in("# table\nsource 0\n\n0 1\n0 1 2\n");
  const PathVectorTable t = read_route_list(in);
  CHECK(t == table(0, {{0, 1}, {0, 1, 2}}));
  std::ostringstream out;
  write_route_list(out, t);
  CHECK(out.str() == "source 0\n0 1\n0 1 2\n");

  auto error_of = [](const std::string& text) {
    std::istringstream s(text);
    try {
      read_route_list(s);
    } catch (const RoutingError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(error_of("") == "missing \"source <label>\" line");
  CHECK(error_of("0 1\n").find("line 1") != std::string::npos);
  CHECK(error_of("source 0\n0 x\n").find("line 2: invalid label") != std::string::npos);
  CHECK(error_of("source\n").find("line 1") != std::string::npos);
  CHECK(error_of("source 0 1\n").find("line 1") != std::string::npos);
}
