#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace treecode {

// Exact-length bit sequence. Renders as ASCII '0'/'1', first bit leftmost.
class BitString {
 public:
  BitString() = default;
  static BitString from_string(std::string_view text);  // throws std::invalid_argument

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i]; }

  void push_back(bool bit) { bits_.push_back(bit); }
  void append(const BitString& other) { bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end()); }
  BitString slice(std::size_t begin, std::size_t end) const;
  std::size_t count_ones() const;

  std::string to_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<bool> bits_;
};

// MSB-first packing of bits into bytes.
class BitWriter {
 public:
  void put(bool bit);
  void put(const BitString& bits);
  void put_uint(std::uint64_t value, unsigned width);
  std::size_t bit_count() const { return bits_; }
  // Pads the final byte with zeros.
  std::vector<std::uint8_t> finish() &&;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bits_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  std::size_t remaining() const { return bytes_.size() * 8 - pos_; }
  std::size_t position() const { return pos_; }
  bool get();
  std::uint64_t get_uint(unsigned width);
  BitString get_bits(std::size_t count);

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace treecode
