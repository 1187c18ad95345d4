#pragma once

#include <cstddef>
#include <string>

#include "rdhei/error.hpp"
#include "rdhei/image.hpp"

namespace rdhei {

struct BlockShape {
  int rows = 0;
  int cols = 0;

  int area() const noexcept { return rows * cols; }
  friend bool operator==(const BlockShape&, const BlockShape&) = default;
};

struct GridPos {
  int row = 0;
  int col = 0;
  friend bool operator==(const GridPos&, const GridPos&) = default;
};

// Non-overlapping partition of the top-left (R*n1) x (C*n2) region of an
// image. Blocks are indexed in snake order: grid row 0 left to right, grid
// row 1 right to left, and so on, so consecutive blocks are 4-adjacent.
// Pixels outside the covered region are pass-through.
class BlockGrid {
 public:
  BlockGrid() = default;

  BlockGrid(int image_rows, int image_cols, BlockShape shape)
      : image_rows_(image_rows), image_cols_(image_cols), shape_(shape) {
    if (shape.rows < 1 || shape.cols < 1) {
      throw ParameterError("block dimensions must be positive");
    }
    if (shape.rows > image_rows || shape.cols > image_cols) {
      throw ParameterError("block " + std::to_string(shape.rows) + "x" +
                           std::to_string(shape.cols) +
                           " larger than image " + std::to_string(image_rows) +
                           "x" + std::to_string(image_cols));
    }
    grid_rows_ = image_rows / shape.rows;
    grid_cols_ = image_cols / shape.cols;
  }

  int image_rows() const noexcept { return image_rows_; }
  int image_cols() const noexcept { return image_cols_; }
  BlockShape shape() const noexcept { return shape_; }
  int grid_rows() const noexcept { return grid_rows_; }
  int grid_cols() const noexcept { return grid_cols_; }
  int block_count() const noexcept { return grid_rows_ * grid_cols_; }

  int covered_rows() const noexcept { return grid_rows_ * shape_.rows; }
  int covered_cols() const noexcept { return grid_cols_ * shape_.cols; }

  bool covers(int r, int c) const noexcept {
    return r < covered_rows() && c < covered_cols();
  }

  GridPos position(int snake_index) const noexcept {
    const int gr = snake_index / grid_cols_;
    const int k = snake_index % grid_cols_;
    return {gr, (gr % 2 == 0) ? k : grid_cols_ - 1 - k};
  }

  int snake_index(GridPos p) const noexcept {
    const int k = (p.row % 2 == 0) ? p.col : grid_cols_ - 1 - p.col;
    return p.row * grid_cols_ + k;
  }

  // Top-left pixel of the block at a grid position.
  int origin_row(GridPos p) const noexcept { return p.row * shape_.rows; }
  int origin_col(GridPos p) const noexcept { return p.col * shape_.cols; }

  friend bool operator==(const BlockGrid&, const BlockGrid&) = default;

 private:
  int image_rows_ = 0;
  int image_cols_ = 0;
  BlockShape shape_;
  int grid_rows_ = 0;
  int grid_cols_ = 0;
};

inline BlockGrid partition(const GrayImage& image, int n1, int n2) {
  return BlockGrid(image.rows(), image.cols(), {n1, n2});
}

// Whole image as a single block.
inline BlockGrid whole_image_grid(int rows, int cols) {
  return BlockGrid(rows, cols, {rows, cols});
}

// Copies one block out of an image, row-major.
inline std::vector<std::uint8_t> read_block(const GrayImage& image,
                                            const BlockGrid& grid, GridPos p) {
  const auto shape = grid.shape();
  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(shape.area()));
  const int r0 = grid.origin_row(p);
  const int c0 = grid.origin_col(p);
  for (int r = 0; r < shape.rows; ++r) {
    for (int c = 0; c < shape.cols; ++c) out.push_back(image(r0 + r, c0 + c));
  }
  return out;
}

inline void write_block(GrayImage& image, const BlockGrid& grid, GridPos p,
                        std::span<const std::uint8_t> block) {
  const auto shape = grid.shape();
  const int r0 = grid.origin_row(p);
  const int c0 = grid.origin_col(p);
  std::size_t i = 0;
  for (int r = 0; r < shape.rows; ++r) {
    for (int c = 0; c < shape.cols; ++c) image(r0 + r, c0 + c) = block[i++];
  }
}

}  // namespace rdhei
