#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rdhei/error.hpp"

namespace rdhei {

// 8-bit single-channel image, row-major.
class GrayImage {
 public:
  GrayImage() = default;

  GrayImage(int rows, int cols, std::uint8_t fill = 0)
      : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1) {
      throw ParameterError("image dimensions must be positive");
    }
    pixels_.assign(static_cast<std::size_t>(rows) * cols, fill);
  }

  GrayImage(int rows, int cols, std::vector<std::uint8_t> pixels)
      : rows_(rows), cols_(cols), pixels_(std::move(pixels)) {
    if (rows < 1 || cols < 1) {
      throw ParameterError("image dimensions must be positive");
    }
    if (pixels_.size() != static_cast<std::size_t>(rows) * cols) {
      throw ParameterError("pixel count does not match image dimensions");
    }
  }

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  std::uint8_t operator()(int r, int c) const noexcept {
    return pixels_[static_cast<std::size_t>(r) * cols_ + c];
  }
  std::uint8_t& operator()(int r, int c) noexcept {
    return pixels_[static_cast<std::size_t>(r) * cols_ + c];
  }

  std::uint8_t operator[](std::size_t i) const noexcept { return pixels_[i]; }
  std::uint8_t& operator[](std::size_t i) noexcept { return pixels_[i]; }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Bit-plane access. `plane` must be in [0, 7].
constexpr int bit(std::uint8_t value, int plane) noexcept {
  return (value >> plane) & 1;
}

constexpr std::uint8_t set_bit(std::uint8_t value, int plane, int b) noexcept {
  const auto mask = static_cast<std::uint8_t>(1u << plane);
  return b ? static_cast<std::uint8_t>(value | mask)
           : static_cast<std::uint8_t>(value & ~mask);
}

namespace detail {

class PgmHeaderParser {
 public:
  explicit PgmHeaderParser(std::span<const std::uint8_t> bytes)
      : bytes_(bytes) {}

  std::size_t pos() const noexcept { return pos_; }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char ch = static_cast<char>(bytes_[pos_]);
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' ||
                 ch == '\v' || ch == '\f') {
        ++pos_;
      } else {
        return;
      }
    }
  }

  long read_number(const char* field) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    long value = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (1L << 30)) {
        throw FormatError(std::string("PGM ") + field + " too large", start);
      }
      ++pos_;
    }
    if (pos_ == start) {
      throw FormatError(std::string("PGM header: expected ") + field, start);
    }
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void expect_single_space() {
    if (pos_ >= bytes_.size()) {
      throw FormatError("PGM header: missing separator before raster", pos_);
    }
    const char ch = static_cast<char>(bytes_[pos_]);
    if (ch != ' ' && ch != '\t' && ch != '\n' && ch != '\r') {
      throw FormatError("PGM header: missing separator before raster", pos_);
    }
    ++pos_;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Decodes a binary (P5) PGM with maxval 255.
inline GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw FormatError("not a binary PGM (missing P5 magic)", 0);
  }
  detail::PgmHeaderParser parser(bytes.subspan(2));
  const long width = parser.read_number("width");
  const long height = parser.read_number("height");
  const std::size_t maxval_offset = parser.pos() + 2;
  const long maxval = parser.read_number("maxval");
  if (maxval != 255) {
    throw FormatError("unsupported maxval " + std::to_string(maxval),
                      maxval_offset);
  }
  if (width < 1 || height < 1) {
    throw FormatError("PGM dimensions must be positive", 2);
  }
  parser.expect_single_space();
  const std::size_t data_offset = parser.pos() + 2;
  const std::size_t needed = static_cast<std::size_t>(width) * height;
  if (bytes.size() - data_offset < needed) {
    throw FormatError("truncated PGM payload (expected " +
                          std::to_string(needed) + " bytes)",
                      bytes.size());
  }
  std::vector<std::uint8_t> pixels(bytes.begin() + data_offset,
                                   bytes.begin() + data_offset + needed);
  return GrayImage(static_cast<int>(height), static_cast<int>(width),
                   std::move(pixels));
}

inline GrayImage load_pgm(std::string_view bytes) {
  return load_pgm(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
}

// Canonical writer: "P5\n<W> <H>\n255\n" followed by the raw raster.
inline std::vector<std::uint8_t> save_pgm(const GrayImage& image) {
  const std::string header = "P5\n" + std::to_string(image.cols()) + " " +
                             std::to_string(image.rows()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.pixels().begin(), image.pixels().end());
  return out;
}

}  // namespace rdhei
