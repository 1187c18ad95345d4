#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rdhei/bits.hpp"
#include "rdhei/error.hpp"
#include "rdhei/image.hpp"

namespace rdhei {

// splitmix64. Deterministic and portable, NOT a cryptographic generator:
// it stands in for a stream cipher so that every party derives the same
// bits. Each key must be used for a single image (one-time pad).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// 256-bit key, written externally as 64 hex characters.
class Key {
 public:
  Key() = default;
  explicit Key(const std::array<std::uint8_t, 32>& bytes) : bytes_(bytes) {}

  static Key from_hex(std::string_view hex) {
    if (hex.size() != 64) {
      throw ParameterError("key must be 64 hex characters, got " +
                           std::to_string(hex.size()));
    }
    auto nibble = [](char ch) -> int {
      if (ch >= '0' && ch <= '9') return ch - '0';
      if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
      if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
      throw ParameterError(std::string("invalid hex character '") + ch + "'");
    };
    std::array<std::uint8_t, 32> bytes{};
    for (std::size_t i = 0; i < 32; ++i) {
      bytes[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 |
                                           nibble(hex[2 * i + 1]));
    }
    return Key(bytes);
  }

  // Convenience for tests and benchmarks: the generator state is `seed`.
  static Key from_seed(std::uint64_t seed) {
    std::array<std::uint8_t, 32> bytes{};
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<std::uint8_t>(seed >> (8 * i));
    SplitMix64 fill(~seed);
    for (int i = 8; i < 32; ++i) bytes[i] = static_cast<std::uint8_t>(fill.next());
    return Key(bytes);
  }

  std::string to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (auto b : bytes_) {
      out.push_back(digits[b >> 4]);
      out.push_back(digits[b & 15]);
    }
    return out;
  }

  // Generator seed: first 8 bytes, little-endian.
  std::uint64_t seed() const noexcept {
    std::uint64_t s = 0;
    for (int i = 7; i >= 0; --i) s = (s << 8) | bytes_[i];
    return s;
  }

  const std::array<std::uint8_t, 32>& bytes() const noexcept { return bytes_; }

  friend bool operator==(const Key&, const Key&) = default;

 private:
  std::array<std::uint8_t, 32> bytes_{};
};

// Generator output bytes, each 64-bit word emitted little-endian.
inline std::vector<std::uint8_t> keystream(std::uint64_t seed, std::size_t n) {
  std::vector<std::uint8_t> out(n);
  SplitMix64 gen(seed);
  for (std::size_t i = 0; i < n; i += 8) {
    const std::uint64_t w = gen.next();
    for (std::size_t k = 0; k < 8 && i + k < n; ++k) {
      out[i + k] = static_cast<std::uint8_t>(w >> (8 * k));
    }
  }
  return out;
}

inline std::vector<std::uint8_t> keystream(const Key& key, std::size_t n) {
  return keystream(key.seed(), n);
}

// Pixel-wise XOR with the keystream in raster order. Involutive.
inline GrayImage xor_image(const GrayImage& image, const Key& key) {
  GrayImage out = image;
  const auto ks = keystream(key, image.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] ^= ks[i];
  return out;
}

// XOR with the keystream's bit expansion (byte order little-endian, bit 0
// of each byte first). Involutive.
inline BitString xor_bits(std::span<const std::uint8_t> bits, const Key& key) {
  const auto ks = keystream(key, (bits.size() + 7) / 8);
  BitString out(bits.begin(), bits.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] ^= static_cast<std::uint8_t>((ks[i / 8] >> (i % 8)) & 1u);
  }
  return out;
}

}  // namespace rdhei
