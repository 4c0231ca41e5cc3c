#include <doctest.h>

#include <string>

#include "helpers.hpp"
#include "treecode/counting.hpp"
#include "treecode/newick.hpp"

using namespace treecode;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_newick(text);
  } catch (const NewickError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("emit examples") {
  CHECK(emit_newick(testing::path(3)) == "(());");
  CHECK(emit_newick(testing::star(3)) == "(,);");
  const Label seven[] = {7};
  CHECK(emit_newick(Tree{}, seven) == "7;");
  CHECK(emit_newick(Tree{}) == ";");
}

TEST_CASE("parse examples") {
  CHECK(parse_newick("(());").tree == testing::path(3));
  CHECK(parse_newick(";").tree == Tree{});
  const Tree t = parse_newick("((,),);").tree;
  CHECK(stats(t) == TreeStats{5, 3, 2});
  CHECK(t.children(0).size() == 2);
  CHECK(t.children(t.children(0)[0]).size() == 2);
  CHECK(parse_newick("(,(,));").tree == t);
  CHECK_FALSE(parse_newick("(());").labels.has_value());
}

TEST_CASE("labels follow the canonical reordering") {
  const NewickTree parsed = parse_newick("(4,(1,2)3)0;");
  REQUIRE(parsed.labels.has_value());
  CHECK(emit_newick(parsed.tree, *parsed.labels) == "((1,2)3,4)0;");
  const NewickTree single = parse_newick("7;");
  REQUIRE(single.labels.has_value());
  CHECK(single.labels->at(0) == 7);
}

TEST_CASE("whitespace after the terminator is ignored") {
  CHECK(parse_newick("(());\n").tree == testing::path(3));
}

TEST_CASE("parse errors") {
  CHECK(error_of("(();").find("unbalanced") != std::string::npos);
  CHECK(error_of("());").find("unbalanced") != std::string::npos);
  CHECK(error_of("(())").find("missing ';'") != std::string::npos);
  CHECK(error_of("(());x").find("trailing") != std::string::npos);
  CHECK(error_of("(a);").find("unexpected character") != std::string::npos);
  CHECK(error_of("(1,);").find("without label") != std::string::npos);
  CHECK(error_of("(99999999999);").find("too large") != std::string::npos);
  CHECK(error_of("").find("missing ';'") != std::string::npos);
}

TEST_CASE("error offsets point into the text") {
  try {
    parse_newick("((),)x;");
    FAIL("expected an error");
  } catch (const NewickError& e) {
    CHECK(e.position() == 5);
  }
  try {
    parse_newick("(3,(1,)2)0;");
    FAIL("expected an error");
  } catch (const NewickError& e) {
    CHECK(e.position() == 6);
  }
}

TEST_CASE("label count must match") {
  const Label two[] = {1, 2};
  CHECK_THROWS_AS(emit_newick(testing::path(3), two), TreeError);
}

TEST_CASE("round trip over all trees up to ten nodes") {
  for (std::size_t n = 1; n <= 10; ++n) {
    for_each_tree(n, [&](const Tree& t) {
      const std::string text = emit_newick(t);
      REQUIRE(parse_newick(text).tree == t);
      // Two bits per structural character plus the terminator bit.
      REQUIRE(newick_bit_length(stats(t)) == 2 * (text.size() - 1) + 1);
      return true;
    });
  }
}

TEST_CASE("deep trees do not exhaust the stack") {
  const Tree t = testing::path(60000);
  const std::string text = emit_newick(t);
  CHECK(text.size() == 2 * 59999 + 1);
  CHECK(parse_newick(text).tree == t);
}

TEST_CASE("bit length examples") {
  CHECK(newick_bit_length({3, 1, 2}) == 9);
  CHECK(newick_bit_length({3, 2, 1}) == 7);
  CHECK(newick_bit_length({1, 1, 0}) == 1);
}
