// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "dct_matrix.hpp"
#include "etcid/simd/kernels.hpp"

namespace etcid::simd::detail {

// int32 with wrapping arithmetic, matching one AVX2 lane.
struct Lane {
  std::uint32_t v;
};
inline Lane add(Lane a, Lane b) { return {a.v + b.v}; }
inline Lane sub(Lane a, Lane b) { return {a.v - b.v}; }
inline Lane mul(Lane a, std::int32_t c) { return {a.v * static_cast<std::uint32_t>(c)}; }
template <int N>
inline Lane sra(Lane a) {
  return {static_cast<std::uint32_t>(static_cast<std::int32_t>(a.v) >> N)};
}

}  // namespace etcid::simd::detail

#include "islow.hpp"

namespace etcid::simd {
namespace {

using detail::dct_matrix;

// out[r] = sum_k lhs[r][k] * rhs[k], accumulated k = 0..7 (matches the AVX2
// broadcast-multiply-add sequence lane for lane).
void mat_rows(const float* lhs, const float* rhs, float* out) {
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      float acc = lhs[r * 8] * rhs[c];
      for (int k = 1; k < 8; ++k) {
        const float prod = lhs[r * 8 + k] * rhs[k * 8 + c];
        acc = acc + prod;
      }
      out[r * 8 + c] = acc;
    }
  }
}

void fdct_quantize(const float* block, const float* divisors, std::int16_t* out) {
  const auto& m = dct_matrix();
  float rows[64];
  float coefs[64];
  mat_rows(block, m.transposed.data(), rows);  // rows[y][u]
  mat_rows(m.basis.data(), rows, coefs);       // coefs[v][u]
  for (int i = 0; i < 64; ++i) {
    out[i] = static_cast<std::int16_t>(std::nearbyint(coefs[i] / divisors[i]));
  }
}

void idct_dequantize(const std::int16_t* coefs, const std::int32_t* qtable, std::uint8_t* out) {
  using namespace detail;
  std::int32_t ws[64];
  const Lane round1{1u << (kPass1Shift - 1)};
  const Lane round2{1u << (kPass2Shift - 1)};
  for (int c = 0; c < 8; ++c) {
    Lane v[8];
    for (int k = 0; k < 8; ++k) {
      v[k].v = static_cast<std::uint32_t>(coefs[k * 8 + c] * qtable[k * 8 + c]);
    }
    islow_1d<kPass1Shift>(v, round1);
    for (int k = 0; k < 8; ++k) ws[k * 8 + c] = static_cast<std::int32_t>(v[k].v);
  }
  for (int r = 0; r < 8; ++r) {
    Lane v[8];
    for (int k = 0; k < 8; ++k) v[k].v = static_cast<std::uint32_t>(ws[r * 8 + k]);
    islow_1d<kPass2Shift>(v, round2);
    for (int k = 0; k < 8; ++k) {
      out[r * 8 + k] = static_cast<std::uint8_t>(std::clamp(static_cast<std::int32_t>(v[k].v) + 128, 0, 255));
    }
  }
}

void rgb_to_ycc(const std::uint8_t* rgb, std::size_t pixels, std::uint8_t* y, std::uint8_t* cb,
                std::uint8_t* cr) {
  using namespace detail;
  for (std::size_t i = 0; i < pixels; ++i) {
    const int r = rgb[3 * i], g = rgb[3 * i + 1], b = rgb[3 * i + 2];
    y[i] = static_cast<std::uint8_t>((kYR * r + kYG * g + kYB * b + kHalf) >> 16);
    cb[i] = static_cast<std::uint8_t>((kCbR * r + kCbG * g + kCbB * b + kChromaBias) >> 16);
    cr[i] = static_cast<std::uint8_t>((kCrR * r + kCrG * g + kCrB * b + kChromaBias) >> 16);
  }
}

std::uint8_t clamp_u8(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

void ycc_to_rgb(const std::uint8_t* y, const std::uint8_t* cb, const std::uint8_t* cr,
                std::size_t pixels, std::uint8_t* rgb) {
  using namespace detail;
  for (std::size_t i = 0; i < pixels; ++i) {
    const int yy = y[i], u = cb[i] - 128, v = cr[i] - 128;
    rgb[3 * i] = clamp_u8(yy + ((kRCr * v + kHalf) >> 16));
    rgb[3 * i + 1] = clamp_u8(yy + ((kGCb * u + kGCr * v + kHalf) >> 16));
    rgb[3 * i + 2] = clamp_u8(yy + ((kBCb * u + kHalf) >> 16));
  }
}

void luma_block_sums(const std::uint8_t* row, std::size_t blocks, int channels,
                     std::int64_t* sums) {
  using namespace detail;
  for (std::size_t b = 0; b < blocks; ++b) {
    std::int64_t acc = 0;
    for (int x = 0; x < 8; ++x) {
      const std::uint8_t* p = row + (b * 8 + x) * channels;
      acc += channels == 3 ? kLumaR * p[0] + kLumaG * p[1] + kLumaB * p[2] : kLumaGray * p[0];
    }
    sums[b] += acc;
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{fdct_quantize, idct_dequantize, rgb_to_ycc, ycc_to_rgb, luma_block_sums};
  return k;
}

}  // namespace etcid::simd
