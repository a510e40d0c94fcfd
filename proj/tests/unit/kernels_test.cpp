// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "etcid/simd/kernels.hpp"

namespace etcid::simd {
namespace {

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!isa_supported(Isa::kAvx2)) GTEST_SKIP() << "no AVX2 on this CPU";
  }
  const Kernels& scalar = scalar_kernels();
  const Kernels& avx2 = kernels_for(Isa::kAvx2);
  std::mt19937_64 rng{20240611};
};

TEST_F(KernelEquivalence, FdctQuantizeBitExact) {
  std::uniform_int_distribution<int> px(-128, 127), q(1, 255);
  for (int trial = 0; trial < 2000; ++trial) {
    alignas(32) float block[64], div[64];
    for (int i = 0; i < 64; ++i) {
      block[i] = static_cast<float>(trial % 3 == 0 ? px(rng) / 4 * 4 : px(rng));
      div[i] = static_cast<float>(trial % 2 ? q(rng) : 1 + q(rng) % 8);
    }
    std::int16_t a[64], b[64];
    scalar.fdct_quantize(block, div, a);
    avx2.fdct_quantize(block, div, b);
    for (int i = 0; i < 64; ++i) ASSERT_EQ(a[i], b[i]) << "trial " << trial << " coef " << i;
  }
}

TEST_F(KernelEquivalence, IdctDequantizeBitExact) {
  std::uniform_int_distribution<int> coef(-1024, 1023), small(-20, 20), q(1, 255);
  for (int trial = 0; trial < 4000; ++trial) {
    alignas(32) std::int16_t c[64];
    alignas(32) std::int32_t qt[64];
    for (int i = 0; i < 64; ++i) {
      c[i] = static_cast<std::int16_t>(i == 0 ? coef(rng) : (trial % 4 == 0 ? coef(rng) : small(rng)));
      qt[i] = q(rng);
    }
    std::uint8_t a[64], b[64];
    scalar.idct_dequantize(c, qt, a);
    avx2.idct_dequantize(c, qt, b);
    for (int i = 0; i < 64; ++i) ASSERT_EQ(a[i], b[i]) << "trial " << trial << " sample " << i;
  }
}

TEST_F(KernelEquivalence, ColorConversionBitExact) {
  std::uniform_int_distribution<int> byte(0, 255);
  for (std::size_t n : {1u, 7u, 8u, 9u, 16u, 63u, 640u, 1001u}) {
    std::vector<std::uint8_t> rgb(3 * n);
    for (auto& v : rgb) v = static_cast<std::uint8_t>(byte(rng));
    std::vector<std::uint8_t> y1(n), cb1(n), cr1(n), y2(n), cb2(n), cr2(n);
    scalar.rgb_to_ycc(rgb.data(), n, y1.data(), cb1.data(), cr1.data());
    avx2.rgb_to_ycc(rgb.data(), n, y2.data(), cb2.data(), cr2.data());
    EXPECT_EQ(y1, y2);
    EXPECT_EQ(cb1, cb2);
    EXPECT_EQ(cr1, cr2);
    std::vector<std::uint8_t> back1(3 * n), back2(3 * n);
    scalar.ycc_to_rgb(y1.data(), cb1.data(), cr1.data(), n, back1.data());
    avx2.ycc_to_rgb(y1.data(), cb1.data(), cr1.data(), n, back2.data());
    EXPECT_EQ(back1, back2);
  }
}

TEST_F(KernelEquivalence, LumaBlockSumsBitExact) {
  std::uniform_int_distribution<int> byte(0, 255);
  for (int channels : {1, 3}) {
    for (std::size_t blocks : {1u, 2u, 5u, 80u}) {
      std::vector<std::uint8_t> row(blocks * 8 * channels);
      for (auto& v : row) v = static_cast<std::uint8_t>(byte(rng));
      std::vector<std::int64_t> a(blocks, 7), b(blocks, 7);
      scalar.luma_block_sums(row.data(), blocks, channels, a.data());
      avx2.luma_block_sums(row.data(), blocks, channels, b.data());
      EXPECT_EQ(a, b) << channels << " channels, " << blocks << " blocks";
    }
  }
}

TEST(Kernels, ScalarIdctCloseToExactTransform) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coef(-60, 60);
  for (int trial = 0; trial < 200; ++trial) {
    std::int16_t c[64];
    std::int32_t q[64];
    for (int i = 0; i < 64; ++i) {
      c[i] = static_cast<std::int16_t>(i < 10 ? coef(rng) : coef(rng) / 8);
      q[i] = 1 + i % 7;
    }
    std::uint8_t out[64];
    scalar_kernels().idct_dequantize(c, q, out);
    for (int y = 0; y < 8; ++y) {
      for (int x = 0; x < 8; ++x) {
        double s = 0;
        for (int v = 0; v < 8; ++v) {
          for (int u = 0; u < 8; ++u) {
            const double cu = u ? 1.0 : std::sqrt(0.5), cv = v ? 1.0 : std::sqrt(0.5);
            s += cu * cv / 4 * c[v * 8 + u] * q[v * 8 + u] * std::cos((2 * x + 1) * u * M_PI / 16) *
                 std::cos((2 * y + 1) * v * M_PI / 16);
          }
        }
        const double expect = std::clamp(s + 128, 0.0, 255.0);
        EXPECT_NEAR(out[y * 8 + x], expect, 1.0) << "trial " << trial;
      }
    }
  }
}

TEST(Kernels, ScalarFdctMatchesExactTransform) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> px(-128, 127);
  for (int trial = 0; trial < 200; ++trial) {
    float block[64], ones[64];
    for (int i = 0; i < 64; ++i) {
      block[i] = static_cast<float>(px(rng));
      ones[i] = 1.0f;
    }
    std::int16_t out[64];
    scalar_kernels().fdct_quantize(block, ones, out);
    for (int v = 0; v < 8; ++v) {
      for (int u = 0; u < 8; ++u) {
        double s = 0;
        for (int y = 0; y < 8; ++y) {
          for (int x = 0; x < 8; ++x) {
            s += block[y * 8 + x] * std::cos((2 * x + 1) * u * M_PI / 16) * std::cos((2 * y + 1) * v * M_PI / 16);
          }
        }
        const double cu = u ? 1.0 : std::sqrt(0.5), cv = v ? 1.0 : std::sqrt(0.5);
        EXPECT_NEAR(out[v * 8 + u], cu * cv / 4 * s, 0.5 + 1e-3);
      }
    }
  }
}

TEST(Kernels, DispatchHonoursSelection) {
  const Isa before = active_isa();
  set_active_isa(Isa::kScalar);
  EXPECT_EQ(active_isa(), Isa::kScalar);
  EXPECT_EQ(&kernels(), &scalar_kernels());
  EXPECT_STREQ(isa_name(Isa::kScalar), "scalar");
  set_active_isa(before);
}

}  // namespace
}  // namespace etcid::simd
