#include <doctest.h>

#include <vector>

#include "treecode/bitstring.hpp"

using namespace treecode;

TEST_CASE("text form") {
  const BitString b = BitString::from_string("01101");
  CHECK(b.size() == 5);
  CHECK(b[1]);
  CHECK_FALSE(b[0]);
  CHECK(b.to_string() == "01101");
  CHECK(b.count_ones() == 3);
  CHECK(BitString::from_string("").empty());
  CHECK_THROWS_AS(BitString::from_string("012"), std::invalid_argument);
}

TEST_CASE("append and slice") {
  BitString a = BitString::from_string("10");
  a.append(BitString::from_string("011"));
  CHECK(a.to_string() == "10011");
  CHECK(a.slice(1, 4).to_string() == "001");
  CHECK(a.slice(3, 99).to_string() == "11");
  CHECK(a.slice(4, 2).empty());
}

TEST_CASE("writer packs most significant bit first and pads with zeros") {
  BitWriter w;
  w.put(true);
  w.put(BitString::from_string("110"));
  w.put_uint(0x5, 3);
  CHECK(w.bit_count() == 7);
  const auto bytes = std::move(w).finish();
  CHECK(bytes == std::vector<std::uint8_t>{0xEA});

  BitWriter w2;
  w2.put_uint(0x11, 8);
  w2.put_uint(2, 16);
  w2.put(true);
  CHECK(std::move(w2).finish() == std::vector<std::uint8_t>{0x11, 0x00, 0x02, 0x80});
}

TEST_CASE("reader mirrors writer") {
  const std::vector<std::uint8_t> bytes{0xEA, 0x01};
  BitReader r(bytes);
  CHECK(r.remaining() == 16);
  CHECK(r.get());
  CHECK(r.get_bits(3).to_string() == "110");
  CHECK(r.get_uint(3) == 5);
  CHECK(r.position() == 7);
  CHECK(r.get_uint(9) == 1);
  CHECK(r.remaining() == 0);
  CHECK_THROWS_AS(r.get(), std::out_of_range);
}
