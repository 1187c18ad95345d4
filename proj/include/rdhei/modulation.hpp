#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdhei/block_grid.hpp"
#include "rdhei/error.hpp"
#include "rdhei/image.hpp"
#include "rdhei/keystream.hpp"

namespace rdhei {

// Scale factor for the constrained modulation. An empty value selects the
// unconstrained rule (every block shifted by its raw keystream byte).
class Zeta {
 public:
  Zeta() = default;
  explicit Zeta(double v) : value_(v) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ParameterError("zeta must be in [0, 1]");
    }
  }
  static Zeta none() { return Zeta(); }

  static Zeta parse(const std::string& s) {
    if (s == "none") return none();
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ParameterError("invalid zeta '" + s + "'");
    }
    if (used != s.size()) throw ParameterError("invalid zeta '" + s + "'");
    return Zeta(v);
  }

  bool constrained() const noexcept { return value_.has_value(); }
  double value() const noexcept { return value_.value_or(1.0); }

  std::string to_string() const {
    if (!value_) return "none";
    std::string s = std::to_string(*value_);
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (s.back() == '.') s.push_back('0');
    return s;
  }

  friend bool operator==(const Zeta&, const Zeta&) = default;

 private:
  std::optional<double> value_;
};

// Shift for block `index` (1-based snake position, index >= 2) given the raw
// byte r and the extrema of the previous plain block. The admissible set is
// {0 .. floor(z(255 - max))} U {floor(255 - z*min) + 1 .. 255}; the choice
// inside it comes from a generator seeded with r XOR index.
inline std::uint8_t constrained_shift(std::uint8_t r, std::uint64_t index,
                                      std::uint8_t prev_min, std::uint8_t prev_max,
                                      double zeta) {
  const int low_top = static_cast<int>(std::floor(zeta * (255 - prev_max)));
  const int high_start = static_cast<int>(std::floor(255.0 - zeta * prev_min)) + 1;
  const std::uint64_t low_count = static_cast<std::uint64_t>(low_top) + 1;
  const std::uint64_t high_count = static_cast<std::uint64_t>(256 - high_start);
  SplitMix64 gen(static_cast<std::uint64_t>(r) ^ index);
  const std::uint64_t k = gen.next() % (low_count + high_count);
  if (k < low_count) return static_cast<std::uint8_t>(k);
  return static_cast<std::uint8_t>(static_cast<std::uint64_t>(high_start) + (k - low_count));
}

// x' = (x + r) mod 256 for each pixel.
inline std::vector<std::uint8_t> shift_block(std::span<const std::uint8_t> block,
                                             std::uint8_t r) {
  std::vector<std::uint8_t> out(block.begin(), block.end());
  for (auto& v : out) v = static_cast<std::uint8_t>(v + r);
  return out;
}

inline std::vector<std::uint8_t> unshift_block(std::span<const std::uint8_t> block,
                                               std::uint8_t r) {
  std::vector<std::uint8_t> out(block.begin(), block.end());
  for (auto& v : out) v = static_cast<std::uint8_t>(v - r);
  return out;
}

struct ModulatedImage {
  GrayImage image;
  std::vector<std::uint8_t> shifts;  // R', in snake order
};

namespace detail {

inline std::pair<std::uint8_t, std::uint8_t> block_extrema(const GrayImage& image,
                                                           const BlockGrid& grid,
                                                           GridPos p) {
  const auto block = read_block(image, grid, p);
  const auto [mn, mx] = std::minmax_element(block.begin(), block.end());
  return {*mn, *mx};
}

inline std::uint8_t next_shift(const std::vector<std::uint8_t>& raw, int i,
                               const GrayImage& plain, const BlockGrid& grid,
                               const Zeta& zeta) {
  const std::uint8_t r = raw[static_cast<std::size_t>(i)];
  if (i == 0 || !zeta.constrained()) return r;
  const auto [mn, mx] = block_extrema(plain, grid, grid.position(i - 1));
  return constrained_shift(r, static_cast<std::uint64_t>(i) + 1, mn, mx, zeta.value());
}

}  // namespace detail

// Shifts every covered block (snake order) by its constrained keystream
// value. The constraint for block i reads the plain block i - 1.
inline ModulatedImage modulate(const GrayImage& plain, const BlockGrid& grid,
                               const Key& key, const Zeta& zeta) {
  const auto raw = keystream(key, static_cast<std::size_t>(grid.block_count()));
  ModulatedImage out{plain, {}};
  out.shifts.reserve(raw.size());
  for (int i = 0; i < grid.block_count(); ++i) {
    const std::uint8_t r = detail::next_shift(raw, i, plain, grid, zeta);
    out.shifts.push_back(r);
    const GridPos p = grid.position(i);
    write_block(out.image, grid, p, shift_block(read_block(plain, grid, p), r));
  }
  return out;
}

// Inverse of modulate. Block i is recovered before block i + 1's shift can
// be derived, so one corrupted block corrupts every later one.
inline GrayImage demodulate(const GrayImage& modulated, const BlockGrid& grid,
                            const Key& key, const Zeta& zeta) {
  const auto raw = keystream(key, static_cast<std::size_t>(grid.block_count()));
  GrayImage out = modulated;
  for (int i = 0; i < grid.block_count(); ++i) {
    const std::uint8_t r = detail::next_shift(raw, i, out, grid, zeta);
    const GridPos p = grid.position(i);
    write_block(out, grid, p, unshift_block(read_block(modulated, grid, p), r));
  }
  return out;
}

}  // namespace rdhei
