#include <gtest/gtest.h>

#include <set>
#include <string>

#include "rdhei/erga.hpp"
#include "rdhei/image.hpp"
#include "test_support.hpp"

using namespace rdhei;

TEST(Pgm, DecodesMinimalImage) {
  const std::string bytes = std::string("P5 2 2 255\n") + '\0' + '\1' + '\2' + '\3';
  const GrayImage img = load_pgm(bytes);
  ASSERT_EQ(img.rows(), 2);
  ASSERT_EQ(img.cols(), 2);
  EXPECT_EQ(img(0, 0), 0);
  EXPECT_EQ(img(0, 1), 1);
  EXPECT_EQ(img(1, 0), 2);
  EXPECT_EQ(img(1, 1), 3);
}

TEST(Pgm, SkipsComments) {
  const std::string bytes = std::string("P5\n# made by hand\n1 # width\n1\n255\n") + '\x2a';
  EXPECT_EQ(load_pgm(bytes)(0, 0), 42);
}

TEST(Pgm, RejectsSixteenBitMaxval) {
  const std::string bytes = std::string("P5 1 1 65535\n") + '\0' + '\0';
  try {
    load_pgm(bytes);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("unsupported maxval"), std::string::npos);
  }
}

TEST(Pgm, RejectsTruncatedAndForeignFiles) {
  EXPECT_THROW(load_pgm(std::string("P5 2 2 255\n") + "abc"), FormatError);
  EXPECT_THROW(load_pgm(std::string("P2 1 1 255\n7")), FormatError);
  EXPECT_THROW(load_pgm(std::string("")), FormatError);
  EXPECT_THROW(load_pgm(std::string("P5 0 1 255\n")), FormatError);
}

TEST(Pgm, CanonicalWriter) {
  const auto bytes = save_pgm(GrayImage(1, 1, 7));
  const std::string expect = std::string("P5\n1 1\n255\n") + '\x07';
  EXPECT_EQ(std::string(bytes.begin(), bytes.end()), expect);
}

TEST(Pgm, HeaderSizeFor512) {
  const auto bytes = save_pgm(GrayImage(512, 512));
  EXPECT_EQ(bytes.size(), 15u + 262144u);
}

TEST(Pgm, RoundTripPreservesPayload) {
  const GrayImage img = fixtures::noise_image(13, 7, 5);
  const auto bytes = save_pgm(img);
  EXPECT_EQ(load_pgm(bytes), img);
  EXPECT_EQ(save_pgm(load_pgm(bytes)), bytes);
}

TEST(BitPlane, ReadAndWrite) {
  EXPECT_EQ(bit(170, 0), 0);
  EXPECT_EQ(bit(170, 1), 1);
  EXPECT_EQ(set_bit(0, 7, 1), 128);
  EXPECT_EQ(set_bit(255, 0, 0), 254);
  for (int v = 0; v < 256; ++v) {
    int sum = 0;
    for (int l = 0; l < 8; ++l) sum += bit(static_cast<std::uint8_t>(v), l) << l;
    EXPECT_EQ(sum, v);
  }
}

TEST(BlockGridTest, CountsBlocks) {
  const BlockGrid g = partition(GrayImage(512, 512), 8, 8);
  EXPECT_EQ(g.block_count(), 4096);
  EXPECT_EQ(g.grid_rows(), 64);
}

TEST(BlockGridTest, SnakeOrderOnFourByFour) {
  const BlockGrid g = partition(GrayImage(16, 16), 4, 4);
  const std::vector<GridPos> expect = {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 3}, {1, 2}};
  for (std::size_t i = 0; i < expect.size(); ++i) {
    EXPECT_EQ(g.position(static_cast<int>(i)), expect[i]);
  }
}

TEST(BlockGridTest, SnakeNeighboursAreAdjacentAndCoverGrid) {
  for (auto [rows, cols] : {std::pair{5, 7}, std::pair{4, 4}, std::pair{1, 9}, std::pair{9, 1}}) {
    const BlockGrid g(rows * 3, cols * 2, {3, 2});
    std::set<std::pair<int, int>> seen;
    for (int i = 0; i < g.block_count(); ++i) {
      const GridPos p = g.position(i);
      EXPECT_EQ(g.snake_index(p), i);
      seen.insert({p.row, p.col});
      if (i > 0) {
        const GridPos q = g.position(i - 1);
        EXPECT_EQ(std::abs(p.row - q.row) + std::abs(p.col - q.col), 1);
      }
    }
    EXPECT_EQ(seen.size(), static_cast<std::size_t>(g.block_count()));
  }
}

TEST(BlockGridTest, RemainderIsPassThrough) {
  const BlockGrid g = partition(GrayImage(10, 10), 3, 3);
  EXPECT_EQ(g.block_count(), 9);
  EXPECT_EQ(g.covered_rows(), 9);
  EXPECT_TRUE(g.covers(8, 8));
  EXPECT_FALSE(g.covers(9, 0));
  EXPECT_FALSE(g.covers(0, 9));
}

TEST(BlockGridTest, RejectsOversizedBlocks) {
  EXPECT_THROW(partition(GrayImage(4, 4), 5, 2), ParameterError);
  EXPECT_THROW(partition(GrayImage(4, 4), 0, 2), ParameterError);
}

TEST(BlockGridTest, ReadWriteBlock) {
  GrayImage img = fixtures::noise_image(6, 6, 1);
  const BlockGrid g = partition(img, 3, 3);
  const auto b = read_block(img, g, {1, 1});
  EXPECT_EQ(b[0], img(3, 3));
  EXPECT_EQ(b[8], img(5, 5));
  std::vector<std::uint8_t> z(9, 9);
  write_block(img, g, {0, 1}, z);
  EXPECT_EQ(img(0, 3), 9);
  EXPECT_EQ(img(2, 5), 9);
}

TEST(BitCursorTest, CapacityExcludesReferencesAndMargin) {
  const GrayImage img(10, 10);
  const BlockGrid g = partition(img, 3, 3);
  const BitCursor cur(g, select_references(7, g));
  EXPECT_EQ(cur.capacity(), 8u * (81 - 9));
}

TEST(BitCursorTest, PlaneMajorOrder) {
  GrayImage img(2, 2, 0);
  const BlockGrid g = whole_image_grid(2, 2);
  const BitCursor cur(g, fixed_references(g, {0, 0}));
  ASSERT_EQ(cur.embedding_pixels(), 3u);
  cur.set(img, 1, 1);  // plane 0 of the second embedding pixel (1, 0)
  cur.set(img, 5, 1);  // plane 1 of the third embedding pixel (1, 1)
  EXPECT_EQ(img(0, 0), 0);
  EXPECT_EQ(img(1, 0), 1);
  EXPECT_EQ(img(1, 1), 2);
}

TEST(BitCursorTest, WriteThenReadAndPassThrough) {
  const GrayImage orig = fixtures::noise_image(11, 13, 3);
  const BlockGrid g = partition(orig, 4, 4);
  const ReferencePlan plan = select_references(99, g);
  const BitCursor cur(g, plan);
  const auto bits = fixtures::noise_image(1, static_cast<int>(cur.capacity()), 4);
  BitString payload(cur.capacity());
  for (std::size_t i = 0; i < payload.size(); ++i) payload[i] = bits[i] & 1;
  GrayImage img = orig;
  cur.write(img, 0, payload);
  EXPECT_EQ(cur.read(img, 0, payload.size()), payload);
  for (int r = 0; r < img.rows(); ++r) {
    for (int c = 0; c < img.cols(); ++c) {
      if (!g.covers(r, c)) {
        EXPECT_EQ(img(r, c), orig(r, c));
      }
    }
  }
  for (int b = 0; b < g.block_count(); ++b) {
    const GridPos p = g.position(b);
    const auto ref = plan.refs[static_cast<std::size_t>(b)];
    const int r = g.origin_row(p) + ref.row;
    const int c = g.origin_col(p) + ref.col;
    EXPECT_EQ(img(r, c), orig(r, c));
  }
  EXPECT_THROW(cur.read(img, 1, cur.capacity()), CapacityError);
}
