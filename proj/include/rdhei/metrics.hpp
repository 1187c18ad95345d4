#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "rdhei/block_grid.hpp"
#include "rdhei/error.hpp"
#include "rdhei/image.hpp"

namespace rdhei {

namespace detail {

inline void check_same_shape(const GrayImage& a, const GrayImage& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ParameterError("image dimensions differ: " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
}

}  // namespace detail

inline double mse(const GrayImage& a, const GrayImage& b) {
  detail::check_same_shape(a, b);
  if (a.size() == 0) return 0.0;
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int d = int{a[i]} - int{b[i]};
    sum += static_cast<std::uint64_t>(d * d);
  }
  return static_cast<double>(sum) / static_cast<double>(a.size());
}

// +inf for identical images.
inline double psnr(const GrayImage& a, const GrayImage& b) {
  const double m = mse(a, b);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / m);
}

// Mean SSIM over every valid placement of an 11x11 Gaussian window
// (sigma 1.5), constants K1 = 0.01, K2 = 0.03, L = 255.
inline double ssim(const GrayImage& a, const GrayImage& b) {
  detail::check_same_shape(a, b);
  constexpr int kWin = 11;
  constexpr double kSigma = 1.5;
  constexpr double c1 = (0.01 * 255) * (0.01 * 255);
  constexpr double c2 = (0.03 * 255) * (0.03 * 255);
  const int rows = a.rows();
  const int cols = a.cols();
  if (rows < kWin || cols < kWin) {
    throw ParameterError("SSIM needs images of at least 11x11");
  }

  std::array<double, kWin> w{};
  double wsum = 0;
  for (int i = 0; i < kWin; ++i) {
    const double x = i - kWin / 2;
    w[i] = std::exp(-x * x / (2 * kSigma * kSigma));
    wsum += w[i];
  }
  for (auto& v : w) v /= wsum;

  // Separable valid-mode filtering of x, y, x^2, y^2, xy.
  const int out_rows = rows - kWin + 1;
  const int out_cols = cols - kWin + 1;
  constexpr int kMaps = 5;
  std::vector<double> horiz(static_cast<std::size_t>(kMaps) * rows * out_cols);
  auto H = [&](int m, int r, int c) -> double& {
    return horiz[(static_cast<std::size_t>(m) * rows + r) * out_cols + c];
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < out_cols; ++c) {
      double s[kMaps] = {};
      for (int k = 0; k < kWin; ++k) {
        const double x = a(r, c + k);
        const double y = b(r, c + k);
        s[0] += w[k] * x;
        s[1] += w[k] * y;
        s[2] += w[k] * x * x;
        s[3] += w[k] * y * y;
        s[4] += w[k] * x * y;
      }
      for (int m = 0; m < kMaps; ++m) H(m, r, c) = s[m];
    }
  }

  double total = 0;
  for (int r = 0; r < out_rows; ++r) {
    for (int c = 0; c < out_cols; ++c) {
      double s[kMaps] = {};
      for (int k = 0; k < kWin; ++k) {
        for (int m = 0; m < kMaps; ++m) s[m] += w[k] * H(m, r + k, c);
      }
      const double mx = s[0];
      const double my = s[1];
      const double vx = s[2] - mx * mx;
      const double vy = s[3] - my * my;
      const double cov = s[4] - mx * my;
      total += ((2 * mx * my + c1) * (2 * cov + c2)) /
               ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
  }
  return total / (static_cast<double>(out_rows) * out_cols);
}

// Pixels of a block split into those that wrap past 255 under the shift and
// those that do not; the smaller side counts as abnormal.
inline std::uint64_t abnormal_count(std::span<const std::uint8_t> block, std::uint8_t shift) {
  std::uint64_t wrapped = 0;
  for (auto v : block) wrapped += (int{v} + shift > 255);
  return std::min<std::uint64_t>(wrapped, block.size() - wrapped);
}

// `shifts` holds one value per block in snake order.
inline std::uint64_t abnormal_count(const GrayImage& plain,
                                    std::span<const std::uint8_t> shifts,
                                    const BlockGrid& grid) {
  if (shifts.size() != static_cast<std::size_t>(grid.block_count())) {
    throw ParameterError("need one shift per block");
  }
  std::uint64_t total = 0;
  for (int i = 0; i < grid.block_count(); ++i) {
    total += abnormal_count(read_block(plain, grid, grid.position(i)),
                            shifts[static_cast<std::size_t>(i)]);
  }
  return total;
}

inline double bit_error_rate(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw ParameterError("bit strings differ in length");
  if (a.empty()) return 0.0;
  std::size_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += (a[i] != b[i]);
  return static_cast<double>(diff) / static_cast<double>(a.size());
}

}  // namespace rdhei
