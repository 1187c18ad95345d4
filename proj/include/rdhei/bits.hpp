#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rdhei/error.hpp"

namespace rdhei {

// One element per bit, each 0 or 1.
using BitString = std::vector<std::uint8_t>;

// Appends the low `width` bits of `value`, most significant first.
inline void append_uint(BitString& out, std::uint64_t value, int width) {
  for (int i = width - 1; i >= 0; --i) {
    out.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
  }
}

inline void append_bits(BitString& out, std::span<const std::uint8_t> bits) {
  out.insert(out.end(), bits.begin(), bits.end());
}

// Sequential MSB-first reader. Reading past the end is a CorruptionError.
class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bits) : bits_(bits) {}

  std::size_t position() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bits_.size() - pos_; }

  std::uint64_t read_uint(int width) {
    if (remaining() < static_cast<std::size_t>(width)) {
      throw CorruptionError("bit stream ended early");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 1) | bits_[pos_++];
    return v;
  }

  int read_bit() { return static_cast<int>(read_uint(1)); }

  std::span<const std::uint8_t> read_span(std::size_t n) {
    if (remaining() < n) throw CorruptionError("bit stream ended early");
    auto s = bits_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  std::span<const std::uint8_t> bits_;
  std::size_t pos_ = 0;
};

// Bytes to bits, MSB of each byte first.
inline BitString bytes_to_bits(std::span<const std::uint8_t> bytes) {
  BitString out;
  out.reserve(bytes.size() * 8);
  for (auto b : bytes) append_uint(out, b, 8);
  return out;
}

// Bits to bytes, MSB first; the final byte is zero-padded.
inline std::vector<std::uint8_t> bits_to_bytes(
    std::span<const std::uint8_t> bits) {
  std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return out;
}

// Smallest w with 2^w >= n, for n >= 1.
constexpr int ceil_log2(std::uint64_t n) noexcept {
  int w = 0;
  while ((std::uint64_t{1} << w) < n) ++w;
  return w;
}

}  // namespace rdhei
