#include <gtest/gtest.h>

#include <random>

#include "rdhei/metrics.hpp"
#include "rdhei/report.hpp"
#include "rdhei/schemes.hpp"
#include "test_support.hpp"

using namespace rdhei;

namespace {

const KeyBundle kKeys = KeyBundle::from_seed(0x5CE5);
const KeyBundle kOther = KeyBundle::from_seed(0xBAD);

}  // namespace

TEST(Vrbe, RoundTripAndSeparability) {
  const GrayImage x = fixtures::smooth_random_image(64, 64, 1);
  for (Backend be : {Backend::kArithmetic, Backend::kHuffman}) {
    const VrbePrepared prep = vrbe_prepare(x, kKeys.e1, kKeys.e2, be);
    EXPECT_EQ(vrbe_room(prep.image, kKeys.e2).capacity(), static_cast<std::uint64_t>(prep.ec));
    const BitString s = random_bits(vrbe_room(prep.image, kKeys.e2).capacity(), 7);
    const GrayImage z = vrbe_embed(prep.image, s, kKeys.e2, kKeys.h);
    // Extraction with K_E2 and K_H only; recovery with K_E1 and K_E2 only.
    EXPECT_EQ(vrbe_extract(z, kKeys.e2, kKeys.h, s.size()), s);
    EXPECT_EQ(vrbe_recover(z, kKeys.e1, kKeys.e2, be), x);
    // Recovery does not depend on which payload was embedded.
    const GrayImage z2 = vrbe_embed(prep.image, random_bits(100, 9), kKeys.e2, kKeys.h);
    EXPECT_EQ(vrbe_recover(z2, kKeys.e1, kKeys.e2, be), x);
    EXPECT_EQ(vrbe_recover(prep.image, kKeys.e1, kKeys.e2, be), x);
  }
}

TEST(Vrbe, WrongKeys) {
  const GrayImage x = fixtures::smooth_random_image(64, 64, 2);
  const VrbePrepared prep = vrbe_prepare(x, kKeys.e1, kKeys.e2, Backend::kArithmetic);
  const BitString s = random_bits(prep.layout.room_bits, 3);
  const GrayImage z = vrbe_embed(prep.image, s, kKeys.e2, kKeys.h);
  const BitString wrong_h = vrbe_extract(z, kKeys.e2, kOther.h, s.size());
  EXPECT_NEAR(bit_error_rate(wrong_h, s), 0.5, 0.05);
  EXPECT_THROW(vrbe_recover(z, kOther.e1, kKeys.e2, Backend::kArithmetic), CorruptionError);
}

TEST(Vrbe, CapacityErrorNamesBothNumbers) {
  const GrayImage x = fixtures::smooth_random_image(32, 32, 4);
  const VrbePrepared prep = vrbe_prepare(x, kKeys.e1, kKeys.e2, Backend::kArithmetic);
  const std::uint64_t cap = prep.layout.room_bits;
  try {
    vrbe_embed(prep.image, BitString(cap + 1, 1), kKeys.e2, kKeys.h);
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find(std::to_string(cap + 1)), std::string::npos);
    EXPECT_NE(msg.find(std::to_string(cap)), std::string::npos);
  }
}

TEST(Vrbe, CipherImageLooksRandom) {
  const GrayImage x = fixtures::smooth_random_image(128, 128, 5);
  const VrbePrepared prep = vrbe_prepare(x, kKeys.e1, kKeys.e2, Backend::kArithmetic);
  EXPECT_LT(psnr(x, prep.image), 15.0);
  EXPECT_LT(ssim(x, prep.image), 0.5);
}

class VraeGrid : public ::testing::TestWithParam<std::tuple<Backend, int, const char*>> {};

TEST_P(VraeGrid, RoundTripAndSeparability) {
  const auto [be, n, z] = GetParam();
  VraeConfig cfg;
  cfg.block = {n, n};
  cfg.zeta = Zeta::parse(z);
  cfg.backend = be;
  for (int i = 0; i < 5; ++i) {
    const GrayImage x = fixtures::smooth_random_image(64, 64, 40 + i);
    const VraeEncrypted enc = vrae_encrypt(x, kKeys.m, kKeys.p, cfg.block, cfg.zeta);
    EXPECT_EQ(vrae_decrypt(enc.image, kKeys.m, kKeys.p, cfg.block, cfg.zeta), x);
    const VraeMarked vac = vrae_vacate(enc.image, cfg);
    const BitString s = random_bits(vac.layout.room_bits, i);
    const GrayImage zimg = vrae_fill(vac, s, kKeys.h, cfg);
    // K_H and the public seed suffice for extraction.
    EXPECT_EQ(vrae_extract(zimg, kKeys.h, cfg, s.size()), s);
    // Intermediate encrypted image is recovered exactly, without K_H.
    EXPECT_EQ(vrae_restore_encrypted(zimg, cfg), enc.image);
    EXPECT_EQ(vrae_recover(zimg, kKeys.m, kKeys.p, cfg), x);
  }
}

INSTANTIATE_TEST_SUITE_P(
    Configs, VraeGrid,
    ::testing::Combine(::testing::Values(Backend::kArithmetic, Backend::kHuffman),
                       ::testing::Values(4, 8), ::testing::Values("0", "0.5", "1", "none")),
    [](const auto& p) {
      std::string z = std::get<2>(p.param);
      for (auto& ch : z) {
        if (ch == '.') ch = 'p';
      }
      return to_string(std::get<0>(p.param)) + "_n" + std::to_string(std::get<1>(p.param)) +
             "_z" + z;
    });

TEST(Vrae, EmbedChecksCapacity) {
  const GrayImage x = fixtures::smooth_random_image(64, 64, 6);
  const VraeConfig cfg;
  const VraeEncrypted enc = vrae_encrypt(x, kKeys.m, kKeys.p, cfg.block, cfg.zeta);
  const VraeMarked vac = vrae_vacate(enc.image, cfg);
  EXPECT_THROW(vrae_embed(enc.image, BitString(vac.layout.room_bits + 1, 0), kKeys.h, cfg),
               CapacityError);
  const VraeMarked full = vrae_embed(enc.image, BitString(vac.layout.room_bits, 1), kKeys.h, cfg);
  EXPECT_EQ(vrae_recover(full.image, kKeys.m, kKeys.p, cfg), x);
}

TEST(Vrae, WrongKeysAndSeed) {
  const GrayImage x = fixtures::smooth_random_image(64, 64, 7);
  VraeConfig cfg;
  cfg.block = {4, 4};
  const VraeEncrypted enc = vrae_encrypt(x, kKeys.m, kKeys.p, cfg.block, cfg.zeta);
  const VraeMarked m = vrae_embed(enc.image, random_bits(4000, 1), kKeys.h, cfg);
  EXPECT_NEAR(bit_error_rate(vrae_extract(m.image, kOther.h, cfg, 4000), random_bits(4000, 1)),
              0.5, 0.05);
  EXPECT_NE(vrae_recover(m.image, kOther.m, kKeys.p, cfg), x);
  EXPECT_NE(vrae_recover(m.image, kKeys.m, kOther.p, cfg), x);

  VraeConfig wrong = cfg;
  wrong.seed = 12345;
  for (Backend be : {Backend::kArithmetic, Backend::kHuffman}) {
    wrong.backend = be;
    try {
      const GrayImage g = vrae_recover(m.image, kKeys.m, kKeys.p, wrong);
      EXPECT_NE(g, x);
    } catch (const CorruptionError&) {
    } catch (const CapacityError&) {
    }
  }
}

TEST(Vrae, EncryptionHidesContent) {
  const GrayImage x = fixtures::test_image("lena");
  const VraeEncrypted enc = vrae_encrypt(x, kKeys.m, kKeys.p, {8, 8}, Zeta(0.5));
  EXPECT_LT(psnr(x, enc.image), 16.0);
  EXPECT_LT(ssim(x, enc.image), 0.5);
}
