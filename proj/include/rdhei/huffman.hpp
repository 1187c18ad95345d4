#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "rdhei/bits.hpp"
#include "rdhei/error.hpp"

namespace rdhei {

inline constexpr int kMaxHuffmanLength = 8;

// Optimal prefix-code lengths with every length <= max_length
// (package-merge). Weights may be zero. A single symbol gets length 1.
inline std::vector<int> package_merge_lengths(std::span<const std::uint64_t> weights,
                                              int max_length = kMaxHuffmanLength) {
  const std::size_t n = weights.size();
  if (n == 0) return {};
  if (n == 1) return {1};
  if (max_length < 1 || max_length >= 63 ||
      n > (std::size_t{1} << max_length)) {
    throw Error("alphabet of " + std::to_string(n) +
                " symbols cannot be coded with lengths <= " +
                std::to_string(max_length));
  }

  // Nodes are leaves (symbol >= 0) or packages of two earlier nodes.
  struct Node {
    std::uint64_t weight;
    int symbol;
    int left;
    int right;
  };
  std::vector<Node> nodes;
  std::vector<int> leaves(n);
  std::iota(leaves.begin(), leaves.end(), 0);
  std::stable_sort(leaves.begin(), leaves.end(),
                   [&](int a, int b) { return weights[a] < weights[b]; });
  std::vector<int> leaf_nodes;
  for (int s : leaves) {
    leaf_nodes.push_back(static_cast<int>(nodes.size()));
    nodes.push_back({weights[static_cast<std::size_t>(s)], s, -1, -1});
  }

  std::vector<int> list = leaf_nodes;
  for (int level = 1; level < max_length; ++level) {
    std::vector<int> packages;
    for (std::size_t i = 0; i + 1 < list.size(); i += 2) {
      packages.push_back(static_cast<int>(nodes.size()));
      nodes.push_back({nodes[list[i]].weight + nodes[list[i + 1]].weight, -1,
                       list[i], list[i + 1]});
    }
    std::vector<int> merged;
    merged.reserve(leaf_nodes.size() + packages.size());
    std::merge(leaf_nodes.begin(), leaf_nodes.end(), packages.begin(),
               packages.end(), std::back_inserter(merged),
               [&](int a, int b) { return nodes[a].weight < nodes[b].weight; });
    list = std::move(merged);
  }

  std::vector<int> lengths(n, 0);
  std::vector<int> stack;
  for (std::size_t i = 0; i < 2 * n - 2; ++i) {
    stack.push_back(list[i]);
    while (!stack.empty()) {
      const Node& node = nodes[static_cast<std::size_t>(stack.back())];
      stack.pop_back();
      if (node.symbol >= 0) {
        ++lengths[static_cast<std::size_t>(node.symbol)];
      } else {
        stack.push_back(node.left);
        stack.push_back(node.right);
      }
    }
  }
  return lengths;
}

// Canonical prefix code: codes assigned in (length, symbol index) order.
class HuffmanTable {
 public:
  HuffmanTable() = default;

  explicit HuffmanTable(std::vector<int> lengths) : lengths_(std::move(lengths)) {
    codes_.assign(lengths_.size(), 0);
    std::vector<std::size_t> order(lengths_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return lengths_[a] < lengths_[b];
    });
    std::uint32_t code = 0;
    int len = 0;
    bool first = true;
    for (auto s : order) {
      const int l = lengths_[s];
      if (l < 1 || l > kMaxHuffmanLength) {
        throw Error("Huffman length out of range");
      }
      if (first) {
        len = l;
        first = false;
      } else {
        ++code;
        code <<= (l - len);
        len = l;
      }
      codes_[s] = code;
    }
    if (!kraft_ok()) throw Error("Huffman lengths violate the Kraft inequality");
  }

  // Codewords taken as given (decoder side); must be prefix-free.
  HuffmanTable(std::vector<int> lengths, std::vector<std::uint32_t> codes)
      : lengths_(std::move(lengths)), codes_(std::move(codes)) {}

  std::size_t size() const noexcept { return lengths_.size(); }
  int length(std::size_t s) const noexcept { return lengths_[s]; }
  std::uint32_t code(std::size_t s) const noexcept { return codes_[s]; }
  const std::vector<int>& lengths() const noexcept { return lengths_; }

  bool kraft_ok() const noexcept {
    std::uint64_t sum = 0;  // units of 2^-kMaxHuffmanLength
    for (int l : lengths_) sum += std::uint64_t{1} << (kMaxHuffmanLength - l);
    return sum <= (std::uint64_t{1} << kMaxHuffmanLength);
  }

  bool prefix_free() const {
    std::array<std::int16_t, 1 << kMaxHuffmanLength> owner;
    owner.fill(-1);
    for (std::size_t s = 0; s < lengths_.size(); ++s) {
      const int l = lengths_[s];
      if (l < 1 || l > kMaxHuffmanLength || codes_[s] >= (1u << l)) return false;
      const std::uint32_t lo = codes_[s] << (kMaxHuffmanLength - l);
      const std::uint32_t hi = (codes_[s] + 1) << (kMaxHuffmanLength - l);
      for (std::uint32_t i = lo; i < hi; ++i) {
        if (owner[i] >= 0) return false;
        owner[i] = static_cast<std::int16_t>(s);
      }
    }
    return true;
  }

  void encode(BitString& out, std::size_t s) const {
    append_uint(out, codes_[s], lengths_[s]);
  }

 private:
  std::vector<int> lengths_;
  std::vector<std::uint32_t> codes_;
};

// Decodes prefix codewords bit by bit.
class HuffmanDecoder {
 public:
  explicit HuffmanDecoder(const HuffmanTable& table) {
    for (auto& row : lookup_) row.fill(-1);
    for (std::size_t s = 0; s < table.size(); ++s) {
      lookup_[static_cast<std::size_t>(table.length(s))][table.code(s)] =
          static_cast<std::int16_t>(s);
    }
  }

  std::size_t decode(BitReader& in) const {
    std::uint32_t code = 0;
    for (int len = 1; len <= kMaxHuffmanLength; ++len) {
      code = (code << 1) | static_cast<std::uint32_t>(in.read_bit());
      const auto s = lookup_[static_cast<std::size_t>(len)][code];
      if (s >= 0) return static_cast<std::size_t>(s);
    }
    throw StreamError("invalid Huffman codeword");
  }

 private:
  std::array<std::array<std::int16_t, 1 << kMaxHuffmanLength>,
             kMaxHuffmanLength + 1>
      lookup_;
};

// Smoothed optimal table: weight of each symbol is its count plus one.
inline HuffmanTable build_huffman(std::span<const std::uint64_t> counts) {
  std::vector<std::uint64_t> weights(counts.begin(), counts.end());
  for (auto& w : weights) ++w;
  return HuffmanTable(package_merge_lengths(weights));
}

}  // namespace rdhei
