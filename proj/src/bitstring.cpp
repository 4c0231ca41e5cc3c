#include "treecode/bitstring.hpp"

#include <algorithm>

namespace treecode {

BitString BitString::from_string(std::string_view text) {
  BitString out;
  out.bits_.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '0' && c != '1') {
      throw std::invalid_argument("bit string: invalid character at offset " + std::to_string(i));
    }
    out.bits_.push_back(c == '1');
  }
  return out;
}

BitString BitString::slice(std::size_t begin, std::size_t end) const {
  BitString out;
  end = std::min(end, size());
  if (begin < end) out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(begin),
                                    bits_.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

std::size_t BitString::count_ones() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::string BitString::to_string() const {
  std::string out;
  out.reserve(size());
  for (bool b : bits_) out += b ? '1' : '0';
  return out;
}

void BitWriter::put(bool bit) {
  if (bits_ % 8 == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bits_ % 8));
  ++bits_;
}

void BitWriter::put(const BitString& bits) {
  for (std::size_t i = 0; i < bits.size(); ++i) put(bits[i]);
}

void BitWriter::put_uint(std::uint64_t value, unsigned width) {
  for (unsigned i = width; i-- > 0;) put(((value >> i) & 1u) != 0);
}

std::vector<std::uint8_t> BitWriter::finish() && { return std::move(bytes_); }

bool BitReader::get() {
  if (remaining() == 0) throw std::out_of_range("bit reader: read past end");
  const bool bit = (bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1u;
  ++pos_;
  return bit;
}

std::uint64_t BitReader::get_uint(unsigned width) {
  std::uint64_t v = 0;
  for (unsigned i = 0; i < width; ++i) v = (v << 1) | (get() ? 1u : 0u);
  return v;
}

BitString BitReader::get_bits(std::size_t count) {
  BitString out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(get());
  return out;
}

}  // namespace treecode
