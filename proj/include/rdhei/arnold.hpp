#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "rdhei/block_grid.hpp"
#include "rdhei/image.hpp"
#include "rdhei/keystream.hpp"

namespace rdhei {

// Block permutation by the generalized Arnold map
//   k' = (k + b*l) mod M,  l' = (a*k + (ab+1)*l) mod M
// applied `iterations` times inside each M x M tile of the block grid.
struct ArnoldParams {
  std::uint64_t a = 1;
  std::uint64_t b = 1;
  int iterations = 1;
  int tile = 1;  // M = gcd(grid rows, grid cols)

  // M < 2 leaves every block in place.
  bool trivial() const noexcept { return tile < 2; }

  friend bool operator==(const ArnoldParams&, const ArnoldParams&) = default;
};

inline ArnoldParams derive_arnold_params(const Key& key, const BlockGrid& grid) {
  SplitMix64 gen(key.seed());
  ArnoldParams p;
  p.a = 1 + gen.next() % 255;
  p.b = 1 + gen.next() % 255;
  p.iterations = 1 + static_cast<int>(gen.next() % 16);
  p.tile = std::gcd(grid.grid_rows(), grid.grid_cols());
  return p;
}

// One forward step on tile-local coordinates.
inline GridPos arnold_step(GridPos p, const ArnoldParams& ap) noexcept {
  const std::uint64_t m = static_cast<std::uint64_t>(ap.tile);
  const std::uint64_t a = ap.a % m;
  const std::uint64_t b = ap.b % m;
  const std::uint64_t d = (a * b + 1) % m;
  const auto k = static_cast<std::uint64_t>(p.row);
  const auto l = static_cast<std::uint64_t>(p.col);
  return {static_cast<int>((k + b * l) % m), static_cast<int>((a * k + d * l) % m)};
}

// One inverse step with the adjugate of the forward matrix:
//   k = ((ab+1)k' - b l') mod M,  l = (-a k' + l') mod M.
// The [[ab+1, -a], [-b, 1]] form swaps a and b and only inverts when a == b.
inline GridPos arnold_inverse_step(GridPos p, const ArnoldParams& ap) noexcept {
  const std::uint64_t m = static_cast<std::uint64_t>(ap.tile);
  const std::uint64_t a = ap.a % m;
  const std::uint64_t b = ap.b % m;
  const std::uint64_t d = (a * b + 1) % m;
  const auto k = static_cast<std::uint64_t>(p.row);
  const auto l = static_cast<std::uint64_t>(p.col);
  return {static_cast<int>((d * k + (m - b) * l) % m),
          static_cast<int>(((m - a) * k + l) % m)};
}

inline GridPos arnold(GridPos p, const ArnoldParams& ap) noexcept {
  if (ap.trivial()) return p;
  for (int i = 0; i < ap.iterations; ++i) p = arnold_step(p, ap);
  return p;
}

inline GridPos arnold_inverse(GridPos p, const ArnoldParams& ap) noexcept {
  if (ap.trivial()) return p;
  for (int i = 0; i < ap.iterations; ++i) p = arnold_inverse_step(p, ap);
  return p;
}

namespace detail {

template <typename Map>
GrayImage move_blocks(const GrayImage& image, const BlockGrid& grid,
                      const ArnoldParams& ap, Map map) {
  GrayImage out = image;
  const int m = ap.tile;
  for (int gr = 0; gr < grid.grid_rows(); ++gr) {
    for (int gc = 0; gc < grid.grid_cols(); ++gc) {
      const GridPos tile_origin{gr / m * m, gc / m * m};
      const GridPos local = map(GridPos{gr % m, gc % m}, ap);
      const GridPos dst{tile_origin.row + local.row, tile_origin.col + local.col};
      write_block(out, grid, dst, read_block(image, grid, {gr, gc}));
    }
  }
  return out;
}

}  // namespace detail

// The block at grid position p moves to arnold(p).
inline GrayImage permute_blocks(const GrayImage& image, const BlockGrid& grid,
                                const ArnoldParams& ap) {
  if (ap.trivial()) return image;
  return detail::move_blocks(image, grid, ap, arnold);
}

inline GrayImage unpermute_blocks(const GrayImage& image, const BlockGrid& grid,
                                  const ArnoldParams& ap) {
  if (ap.trivial()) return image;
  return detail::move_blocks(image, grid, ap, arnold_inverse);
}

}  // namespace rdhei
