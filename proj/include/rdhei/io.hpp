#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <vector>

#include "rdhei/error.hpp"
#include "rdhei/image.hpp"

namespace rdhei {

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

inline GrayImage read_pgm_file(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return load_pgm(bytes);
}

inline void write_pgm_file(const std::filesystem::path& path,
                           const GrayImage& image) {
  write_file(path, save_pgm(image));
}

}  // namespace rdhei
