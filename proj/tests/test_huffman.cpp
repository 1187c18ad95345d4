#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "rdhei/huffman.hpp"

using namespace rdhei;

namespace {

std::uint64_t cost(const std::vector<std::uint64_t>& w, const std::vector<int>& len) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < w.size(); ++i) c += w[i] * static_cast<std::uint64_t>(len[i]);
  return c;
}

// Exhaustive optimum over all length vectors in [1, max_len]^n that satisfy
// Kraft; independent of any tree construction.
std::uint64_t brute_force_optimum(const std::vector<std::uint64_t>& w, int max_len) {
  const std::size_t n = w.size();
  if (n == 1) return w[0];
  std::vector<int> len(n, 1);
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (;;) {
    double kraft = 0;
    for (int l : len) kraft += std::ldexp(1.0, -l);
    if (kraft <= 1.0 + 1e-12) best = std::min(best, cost(w, len));
    std::size_t i = 0;
    while (i < n && len[i] == max_len) len[i++] = 1;
    if (i == n) break;
    ++len[i];
  }
  return best;
}

}  // namespace

TEST(PackageMerge, MatchesExhaustiveOptimumOnSmallModels) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    std::vector<std::uint64_t> w(n);
    for (auto& x : w) x = rng() % 1000;
    const auto len = package_merge_lengths(w);
    EXPECT_EQ(cost(w, len), brute_force_optimum(w, static_cast<int>(n))) << "trial " << trial;
  }
}

TEST(PackageMerge, RespectsBindingLengthLimit) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng() % 4;
    const int limit = 3;
    std::vector<std::uint64_t> w(n);
    // Fibonacci-like weights make unconstrained codes deeper than the limit.
    std::uint64_t a = 1, b = 1;
    for (auto& x : w) {
      x = a + rng() % 2;
      const auto t = a + b;
      a = b;
      b = t;
    }
    const auto len = package_merge_lengths(w, limit);
    for (int l : len) EXPECT_LE(l, limit);
    EXPECT_EQ(cost(w, len), brute_force_optimum(w, limit));
  }
}

TEST(PackageMerge, EdgeCases) {
  EXPECT_EQ(package_merge_lengths(std::vector<std::uint64_t>{5}), std::vector<int>{1});
  EXPECT_EQ(package_merge_lengths(std::vector<std::uint64_t>{0, 0}), (std::vector<int>{1, 1}));
  EXPECT_THROW(package_merge_lengths(std::vector<std::uint64_t>(257, 1)), Error);
  const auto full = package_merge_lengths(std::vector<std::uint64_t>(256, 1));
  for (int l : full) EXPECT_EQ(l, 8);
}

TEST(HuffmanTableTest, CanonicalCodes) {
  const HuffmanTable t(std::vector<int>{2, 1, 3, 3});
  EXPECT_EQ(t.code(1), 0b0u);
  EXPECT_EQ(t.code(0), 0b10u);
  EXPECT_EQ(t.code(2), 0b110u);
  EXPECT_EQ(t.code(3), 0b111u);
  EXPECT_TRUE(t.prefix_free());
  EXPECT_THROW(HuffmanTable(std::vector<int>{1, 1, 1}), Error);
}

TEST(HuffmanTableTest, SmoothedBuildCoversAbsentSymbols) {
  const std::vector<std::uint64_t> counts = {0, 1000, 3, 0, 0};
  const HuffmanTable t = build_huffman(counts);
  EXPECT_TRUE(t.kraft_ok());
  EXPECT_TRUE(t.prefix_free());
  EXPECT_EQ(t.length(1), 1);
  for (std::size_t s = 0; s < counts.size(); ++s) EXPECT_GE(t.length(s), 1);
}

TEST(HuffmanDecoderTest, RoundTripAndInvalidCodeword) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 255;
    std::vector<std::uint64_t> counts(n);
    for (auto& c : counts) c = rng() % 50;
    const HuffmanTable t = build_huffman(counts);
    std::vector<std::size_t> syms(200);
    BitString bits;
    for (auto& s : syms) {
      s = rng() % n;
      t.encode(bits, s);
    }
    BitReader in(bits);
    const HuffmanDecoder dec(t);
    for (auto s : syms) ASSERT_EQ(dec.decode(in), s);
    EXPECT_EQ(in.remaining(), 0u);
  }
  // Incomplete code: "11" is never assigned.
  const HuffmanTable partial(std::vector<int>{1, 2}, std::vector<std::uint32_t>{0, 2});
  const BitString bad(8, 1);
  BitReader in(bad);
  EXPECT_THROW(HuffmanDecoder(partial).decode(in), StreamError);
}
