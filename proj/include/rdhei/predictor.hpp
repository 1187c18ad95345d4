#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <vector>

#include "rdhei/block_grid.hpp"
#include "rdhei/error.hpp"
#include "rdhei/image.hpp"
#include "rdhei/keystream.hpp"

namespace rdhei {

// Zero-based position inside a block.
struct InBlockPos {
  int row = 0;
  int col = 0;
  friend bool operator==(const InBlockPos&, const InBlockPos&) = default;
};

// One reference pixel per block, indexed by snake order.
struct ReferencePlan {
  std::uint64_t seed = 0;
  std::vector<InBlockPos> refs;

  friend bool operator==(const ReferencePlan&, const ReferencePlan&) = default;
};

inline constexpr std::uint64_t kDefaultReferenceSeed = 0x5EED0001;

// Block i takes the i-th generator word s: row = s mod n1,
// col = (s / n1) mod n2.
inline ReferencePlan select_references(std::uint64_t seed,
                                       const BlockGrid& grid) {
  const auto shape = grid.shape();
  if (shape.area() < 2) {
    throw ParameterError("blocks need at least two pixels");
  }
  ReferencePlan plan{seed, {}};
  plan.refs.reserve(static_cast<std::size_t>(grid.block_count()));
  SplitMix64 gen(seed);
  const auto n1 = static_cast<std::uint64_t>(shape.rows);
  const auto n2 = static_cast<std::uint64_t>(shape.cols);
  for (int i = 0; i < grid.block_count(); ++i) {
    const std::uint64_t s = gen.next();
    plan.refs.push_back({static_cast<int>(s % n1),
                         static_cast<int>((s / n1) % n2)});
  }
  return plan;
}

// Same reference position in every block (whole-image mode uses (0, 0)).
inline ReferencePlan fixed_references(const BlockGrid& grid, InBlockPos ref) {
  return {0, std::vector<InBlockPos>(
                 static_cast<std::size_t>(grid.block_count()), ref)};
}

// Median edge detector. The b + c - a branch is not clamped.
constexpr int med(int a, int b, int c) noexcept {
  const int lo = std::min(b, c);
  const int hi = std::max(b, c);
  if (a <= lo) return hi;
  if (a >= hi) return lo;
  return b + c - a;
}

enum class PredictKind : std::uint8_t { kNeighbor, kMed };

// Linear offsets are row * stride + col relative to the block origin.
struct PredictionStep {
  std::int32_t target;
  std::int32_t a;  // neighbour for kNeighbor; diagonal for kMed
  std::int32_t b;  // vertical neighbour toward the reference row
  std::int32_t c;  // horizontal neighbour toward the reference column
  PredictKind kind;
};

// Canonical recovery order: the reference row outward from the reference
// (left side first), then the reference column outward (upper side first),
// then the remaining pixels by Chebyshev distance, Manhattan distance, row,
// col. Every step's inputs precede it.
inline std::vector<PredictionStep> recovery_order(BlockShape shape,
                                                  InBlockPos ref,
                                                  int stride) {
  const int n1 = shape.rows;
  const int n2 = shape.cols;
  const int r0 = ref.row;
  const int c0 = ref.col;
  assert(r0 >= 0 && r0 < n1 && c0 >= 0 && c0 < n2);
  auto at = [stride](int r, int c) { return r * stride + c; };

  std::vector<PredictionStep> steps;
  steps.reserve(static_cast<std::size_t>(shape.area()) - 1);
  for (int c = c0 - 1; c >= 0; --c) {
    steps.push_back({at(r0, c), at(r0, c + 1), 0, 0, PredictKind::kNeighbor});
  }
  for (int c = c0 + 1; c < n2; ++c) {
    steps.push_back({at(r0, c), at(r0, c - 1), 0, 0, PredictKind::kNeighbor});
  }
  for (int r = r0 - 1; r >= 0; --r) {
    steps.push_back({at(r, c0), at(r + 1, c0), 0, 0, PredictKind::kNeighbor});
  }
  for (int r = r0 + 1; r < n1; ++r) {
    steps.push_back({at(r, c0), at(r - 1, c0), 0, 0, PredictKind::kNeighbor});
  }

  struct Corner {
    int cheb, manh, r, c;
  };
  std::vector<Corner> corners;
  corners.reserve(static_cast<std::size_t>(n1 - 1) * (n2 - 1));
  for (int r = 0; r < n1; ++r) {
    if (r == r0) continue;
    for (int c = 0; c < n2; ++c) {
      if (c == c0) continue;
      const int dr = std::abs(r - r0);
      const int dc = std::abs(c - c0);
      corners.push_back({std::max(dr, dc), dr + dc, r, c});
    }
  }
  std::sort(corners.begin(), corners.end(), [](const Corner& x, const Corner& y) {
    if (x.cheb != y.cheb) return x.cheb < y.cheb;
    if (x.manh != y.manh) return x.manh < y.manh;
    if (x.r != y.r) return x.r < y.r;
    return x.c < y.c;
  });
  for (const auto& k : corners) {
    const int ry = k.r < r0 ? k.r + 1 : k.r - 1;
    const int cx = k.c < c0 ? k.c + 1 : k.c - 1;
    steps.push_back(
        {at(k.r, k.c), at(ry, cx), at(ry, k.c), at(k.r, cx), PredictKind::kMed});
  }
  return steps;
}

template <typename Pixel>
inline int predict_value(const PredictionStep& s, const Pixel* base) noexcept {
  if (s.kind == PredictKind::kNeighbor) return base[s.a];
  return med(base[s.a], base[s.b], base[s.c]);
}

// Prediction errors of one row-major block, in canonical recovery order.
inline std::vector<int> predict_block(std::span<const std::uint8_t> block,
                                      BlockShape shape, InBlockPos ref) {
  const auto steps = recovery_order(shape, ref, shape.cols);
  std::vector<int> errors;
  errors.reserve(steps.size());
  for (const auto& s : steps) {
    errors.push_back(block[static_cast<std::size_t>(s.target)] -
                     predict_value(s, block.data()));
  }
  return errors;
}

// Per-pixel code in canonical order: a prediction error or, for joint
// pixels, the literal 8-bit value.
struct PixelCode {
  bool joint = false;
  int value = 0;
};

// Inverse of predict_block. Returns the row-major block.
inline std::vector<std::uint8_t> recover_block(std::uint8_t ref_value,
                                               std::span<const PixelCode> codes,
                                               BlockShape shape,
                                               InBlockPos ref) {
  const auto steps = recovery_order(shape, ref, shape.cols);
  if (codes.size() != steps.size()) {
    throw ParameterError("recover_block: code count does not match block");
  }
  std::vector<int> out(static_cast<std::size_t>(shape.area()), 0);
  out[static_cast<std::size_t>(ref.row * shape.cols + ref.col)] = ref_value;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    const int v = codes[i].joint ? codes[i].value
                                 : codes[i].value + predict_value(s, out.data());
    if (v < 0 || v > 255) {
      throw CorruptionError("recovered pixel out of range");
    }
    out[static_cast<std::size_t>(s.target)] = v;
  }
  return {out.begin(), out.end()};
}

// Prediction-error histogram. The domain is widened to [-510, 510] because
// the MED branch b + c - a is unclamped.
class Peh {
 public:
  static constexpr int kMaxAbs = 510;

  std::uint64_t operator[](int e) const noexcept {
    return counts_[static_cast<std::size_t>(e + kMaxAbs)];
  }
  void add(int e) noexcept { ++counts_[static_cast<std::size_t>(e + kMaxAbs)]; }

  std::uint64_t total() const noexcept {
    std::uint64_t t = 0;
    for (auto c : counts_) t += c;
    return t;
  }

  // Sum of counts for e in [lo, hi].
  std::uint64_t range_sum(int lo, int hi) const noexcept {
    std::uint64_t t = 0;
    for (int e = std::max(lo, -kMaxAbs); e <= std::min(hi, kMaxAbs); ++e) {
      t += (*this)[e];
    }
    return t;
  }

  friend bool operator==(const Peh&, const Peh&) = default;

 private:
  std::array<std::uint64_t, 2 * kMaxAbs + 1> counts_{};
};

inline Peh build_peh(std::span<const int> errors) {
  Peh h;
  for (int e : errors) h.add(e);
  return h;
}

inline Peh build_peh(std::span<const std::int16_t> errors) {
  Peh h;
  for (int e : errors) h.add(e);
  return h;
}

// Canonical traversal of every embedding pixel in an image: blocks in snake
// order, pixels in recovery order within each block.
class ImagePredictor {
 public:
  ImagePredictor(const BlockGrid& grid, const ReferencePlan& plan)
      : grid_(grid), plan_(plan) {
    if (plan.refs.size() != static_cast<std::size_t>(grid.block_count())) {
      throw ParameterError("reference plan does not match block grid");
    }
    if (grid.shape().area() < 2) {
      throw ParameterError("blocks need at least two pixels");
    }
    const auto shape = grid.shape();
    orders_.resize(static_cast<std::size_t>(shape.area()));
    for (const auto& ref : plan.refs) {
      if (ref.row < 0 || ref.row >= shape.rows || ref.col < 0 ||
          ref.col >= shape.cols) {
        throw ParameterError("reference outside its block");
      }
      auto& slot = orders_[static_cast<std::size_t>(ref.row * shape.cols + ref.col)];
      if (slot.empty()) slot = recovery_order(shape, ref, grid.image_cols());
    }
  }

  const BlockGrid& grid() const noexcept { return grid_; }
  const ReferencePlan& plan() const noexcept { return plan_; }

  std::size_t embedding_pixel_count() const noexcept {
    return static_cast<std::size_t>(grid_.block_count()) *
           static_cast<std::size_t>(grid_.shape().area() - 1);
  }

  // Image-relative steps for the reference position of block i.
  const std::vector<PredictionStep>& steps_for(int block) const {
    const InBlockPos ref = plan_.refs[static_cast<std::size_t>(block)];
    return orders_[static_cast<std::size_t>(ref.row * grid_.shape().cols +
                                            ref.col)];
  }

  std::size_t block_origin(int block) const noexcept {
    const GridPos p = grid_.position(block);
    return static_cast<std::size_t>(grid_.origin_row(p)) * grid_.image_cols() +
           static_cast<std::size_t>(grid_.origin_col(p));
  }

  std::size_t reference_index(int block) const noexcept {
    const InBlockPos ref = plan_.refs[static_cast<std::size_t>(block)];
    return block_origin(block) +
           static_cast<std::size_t>(ref.row) * grid_.image_cols() +
           static_cast<std::size_t>(ref.col);
  }

  // Prediction errors of every embedding pixel, in canonical order.
  std::vector<std::int16_t> errors(const GrayImage& image) const {
    check_image(image);
    std::vector<std::int16_t> out;
    out.reserve(embedding_pixel_count());
    const std::uint8_t* px = image.pixels().data();
    for (int b = 0; b < grid_.block_count(); ++b) {
      const std::uint8_t* base = px + block_origin(b);
      for (const auto& s : steps_for(b)) {
        out.push_back(static_cast<std::int16_t>(base[s.target] -
                                                predict_value(s, base)));
      }
    }
    return out;
  }

  // Pixel values of every embedding pixel, in canonical order.
  std::vector<std::uint8_t> values(const GrayImage& image) const {
    check_image(image);
    std::vector<std::uint8_t> out;
    out.reserve(embedding_pixel_count());
    const std::uint8_t* px = image.pixels().data();
    for (int b = 0; b < grid_.block_count(); ++b) {
      const std::uint8_t* base = px + block_origin(b);
      for (const auto& s : steps_for(b)) out.push_back(base[s.target]);
    }
    return out;
  }

  void check_image(const GrayImage& image) const {
    if (image.rows() != grid_.image_rows() ||
        image.cols() != grid_.image_cols()) {
      throw ParameterError("image does not match block grid");
    }
  }

 private:
  BlockGrid grid_;
  ReferencePlan plan_;
  std::vector<std::vector<PredictionStep>> orders_;  // by in-block ref index
};

}  // namespace rdhei
