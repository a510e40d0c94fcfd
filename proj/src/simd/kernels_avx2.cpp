// SPDX-License-Identifier: Apache-2.0
//
// Compiled with -mavx2. Only reached after a runtime CPU check.
#include <immintrin.h>

#include "dct_matrix.hpp"
#include "etcid/simd/kernels.hpp"

namespace etcid::simd::detail {

inline __m256i add(__m256i a, __m256i b) { return _mm256_add_epi32(a, b); }
inline __m256i sub(__m256i a, __m256i b) { return _mm256_sub_epi32(a, b); }
inline __m256i mul(__m256i a, std::int32_t c) { return _mm256_mullo_epi32(a, _mm256_set1_epi32(c)); }
template <int N>
inline __m256i sra(__m256i a) {
  return _mm256_srai_epi32(a, N);
}

}  // namespace etcid::simd::detail

#include "islow.hpp"

namespace etcid::simd {
namespace {

using detail::dct_matrix;

inline void mat_rows(const float* lhs, const float* rhs, float* out) {
  __m256 rhs_rows[8];
  for (int k = 0; k < 8; ++k) rhs_rows[k] = _mm256_loadu_ps(rhs + k * 8);
  for (int r = 0; r < 8; ++r) {
    __m256 acc = _mm256_mul_ps(_mm256_set1_ps(lhs[r * 8]), rhs_rows[0]);
    for (int k = 1; k < 8; ++k) {
      acc = _mm256_add_ps(acc, _mm256_mul_ps(_mm256_set1_ps(lhs[r * 8 + k]), rhs_rows[k]));
    }
    _mm256_storeu_ps(out + r * 8, acc);
  }
}

// 8 x int32 -> 8 x uint8 with unsigned saturation, stored to dst.
inline void store_u8x8(__m256i v, std::uint8_t* dst) {
  const __m128i words = _mm_packus_epi32(_mm256_castsi256_si128(v), _mm256_extracti128_si256(v, 1));
  _mm_storel_epi64(reinterpret_cast<__m128i*>(dst), _mm_packus_epi16(words, words));
}

inline __m256i load_u8x8(const std::uint8_t* src) {
  return _mm256_cvtepu8_epi32(_mm_loadl_epi64(reinterpret_cast<const __m128i*>(src)));
}

// Splits 8 interleaved RGB pixels (24 bytes) into three 8 x int32 vectors.
inline void deinterleave_rgb8(const std::uint8_t* p, __m256i& r, __m256i& g, __m256i& b) {
  const __m128i lo = _mm_loadu_si128(reinterpret_cast<const __m128i*>(p));
  const __m128i hi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(p + 8));
  const __m128i r8 = _mm_or_si128(
      _mm_shuffle_epi8(lo, _mm_setr_epi8(0, 3, 6, 9, 12, 15, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1)),
      _mm_shuffle_epi8(hi, _mm_setr_epi8(-1, -1, -1, -1, -1, -1, 10, 13, -1, -1, -1, -1, -1, -1, -1, -1)));
  const __m128i g8 = _mm_or_si128(
      _mm_shuffle_epi8(lo, _mm_setr_epi8(1, 4, 7, 10, 13, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1)),
      _mm_shuffle_epi8(hi, _mm_setr_epi8(-1, -1, -1, -1, -1, 8, 11, 14, -1, -1, -1, -1, -1, -1, -1, -1)));
  const __m128i b8 = _mm_or_si128(
      _mm_shuffle_epi8(lo, _mm_setr_epi8(2, 5, 8, 11, 14, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1)),
      _mm_shuffle_epi8(hi, _mm_setr_epi8(-1, -1, -1, -1, -1, 9, 12, 15, -1, -1, -1, -1, -1, -1, -1, -1)));
  r = _mm256_cvtepu8_epi32(r8);
  g = _mm256_cvtepu8_epi32(g8);
  b = _mm256_cvtepu8_epi32(b8);
}

inline std::int64_t hsum_epi32(__m256i v) {
  __m128i s = _mm_add_epi32(_mm256_castsi256_si128(v), _mm256_extracti128_si256(v, 1));
  s = _mm_add_epi32(s, _mm_shuffle_epi32(s, _MM_SHUFFLE(1, 0, 3, 2)));
  s = _mm_add_epi32(s, _mm_shuffle_epi32(s, _MM_SHUFFLE(2, 3, 0, 1)));
  return _mm_cvtsi128_si32(s);
}

void fdct_quantize(const float* block, const float* divisors, std::int16_t* out) {
  const auto& m = dct_matrix();
  alignas(32) float rows[64];
  alignas(32) float coefs[64];
  mat_rows(block, m.transposed.data(), rows);
  mat_rows(m.basis.data(), rows, coefs);
  for (int i = 0; i < 64; i += 8) {
    const __m256 q = _mm256_div_ps(_mm256_load_ps(coefs + i), _mm256_loadu_ps(divisors + i));
    const __m256i n = _mm256_cvtps_epi32(
        _mm256_round_ps(q, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC));
    const __m128i packed = _mm_packs_epi32(_mm256_castsi256_si128(n), _mm256_extracti128_si256(n, 1));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i), packed);
  }
}

inline void transpose8x8(__m256i (&v)[8]) {
  const __m256i t0 = _mm256_unpacklo_epi32(v[0], v[1]);
  const __m256i t1 = _mm256_unpackhi_epi32(v[0], v[1]);
  const __m256i t2 = _mm256_unpacklo_epi32(v[2], v[3]);
  const __m256i t3 = _mm256_unpackhi_epi32(v[2], v[3]);
  const __m256i t4 = _mm256_unpacklo_epi32(v[4], v[5]);
  const __m256i t5 = _mm256_unpackhi_epi32(v[4], v[5]);
  const __m256i t6 = _mm256_unpacklo_epi32(v[6], v[7]);
  const __m256i t7 = _mm256_unpackhi_epi32(v[6], v[7]);
  const __m256i u0 = _mm256_unpacklo_epi64(t0, t2);
  const __m256i u1 = _mm256_unpackhi_epi64(t0, t2);
  const __m256i u2 = _mm256_unpacklo_epi64(t1, t3);
  const __m256i u3 = _mm256_unpackhi_epi64(t1, t3);
  const __m256i u4 = _mm256_unpacklo_epi64(t4, t6);
  const __m256i u5 = _mm256_unpackhi_epi64(t4, t6);
  const __m256i u6 = _mm256_unpacklo_epi64(t5, t7);
  const __m256i u7 = _mm256_unpackhi_epi64(t5, t7);
  v[0] = _mm256_permute2x128_si256(u0, u4, 0x20);
  v[1] = _mm256_permute2x128_si256(u1, u5, 0x20);
  v[2] = _mm256_permute2x128_si256(u2, u6, 0x20);
  v[3] = _mm256_permute2x128_si256(u3, u7, 0x20);
  v[4] = _mm256_permute2x128_si256(u0, u4, 0x31);
  v[5] = _mm256_permute2x128_si256(u1, u5, 0x31);
  v[6] = _mm256_permute2x128_si256(u2, u6, 0x31);
  v[7] = _mm256_permute2x128_si256(u3, u7, 0x31);
}

// Lanes are columns in the first pass and rows in the second.
void idct_dequantize(const std::int16_t* coefs, const std::int32_t* qtable, std::uint8_t* out) {
  using namespace detail;
  __m256i v[8];
  for (int k = 0; k < 8; ++k) {
    const __m256i c = _mm256_cvtepi16_epi32(_mm_loadu_si128(reinterpret_cast<const __m128i*>(coefs + k * 8)));
    v[k] = _mm256_mullo_epi32(c, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(qtable + k * 8)));
  }
  islow_1d<kPass1Shift>(v, _mm256_set1_epi32(1 << (kPass1Shift - 1)));
  transpose8x8(v);
  islow_1d<kPass2Shift>(v, _mm256_set1_epi32(1 << (kPass2Shift - 1)));
  transpose8x8(v);
  const __m256i center = _mm256_set1_epi32(128);
  for (int r = 0; r < 8; ++r) store_u8x8(_mm256_add_epi32(v[r], center), out + r * 8);
}

void rgb_to_ycc(const std::uint8_t* rgb, std::size_t pixels, std::uint8_t* y, std::uint8_t* cb,
                std::uint8_t* cr) {
  using namespace detail;
  const __m256i half = _mm256_set1_epi32(kHalf);
  const __m256i bias = _mm256_set1_epi32(kChromaBias);
  std::size_t i = 0;
  for (; i + 8 <= pixels; i += 8) {
    __m256i r, g, b;
    deinterleave_rgb8(rgb + 3 * i, r, g, b);
    auto dot = [&](int cr_, int cg_, int cb_, __m256i offset) {
      __m256i acc = _mm256_mullo_epi32(r, _mm256_set1_epi32(cr_));
      acc = _mm256_add_epi32(acc, _mm256_mullo_epi32(g, _mm256_set1_epi32(cg_)));
      acc = _mm256_add_epi32(acc, _mm256_mullo_epi32(b, _mm256_set1_epi32(cb_)));
      return _mm256_srai_epi32(_mm256_add_epi32(acc, offset), 16);
    };
    store_u8x8(dot(kYR, kYG, kYB, half), y + i);
    store_u8x8(dot(kCbR, kCbG, kCbB, bias), cb + i);
    store_u8x8(dot(kCrR, kCrG, kCrB, bias), cr + i);
  }
  if (i < pixels) scalar_kernels().rgb_to_ycc(rgb + 3 * i, pixels - i, y + i, cb + i, cr + i);
}

void ycc_to_rgb(const std::uint8_t* y, const std::uint8_t* cb, const std::uint8_t* cr,
                std::size_t pixels, std::uint8_t* rgb) {
  using namespace detail;
  const __m256i half = _mm256_set1_epi32(kHalf);
  const __m256i center = _mm256_set1_epi32(128);
  // Byte k of the 24-byte output takes R, G or B of pixel k/3.
  const __m128i rg_lo = _mm_setr_epi8(0, 8, -1, 1, 9, -1, 2, 10, -1, 3, 11, -1, 4, 12, -1, 5);
  const __m128i b_lo = _mm_setr_epi8(-1, -1, 0, -1, -1, 1, -1, -1, 2, -1, -1, 3, -1, -1, 4, -1);
  const __m128i rg_hi = _mm_setr_epi8(13, -1, 6, 14, -1, 7, 15, -1, -1, -1, -1, -1, -1, -1, -1, -1);
  const __m128i b_hi = _mm_setr_epi8(-1, 5, -1, -1, 6, -1, -1, 7, -1, -1, -1, -1, -1, -1, -1, -1);
  std::size_t i = 0;
  for (; i + 8 <= pixels; i += 8) {
    const __m256i yy = load_u8x8(y + i);
    const __m256i u = _mm256_sub_epi32(load_u8x8(cb + i), center);
    const __m256i v = _mm256_sub_epi32(load_u8x8(cr + i), center);
    const __m256i r = _mm256_add_epi32(
        yy, _mm256_srai_epi32(_mm256_add_epi32(_mm256_mullo_epi32(v, _mm256_set1_epi32(kRCr)), half), 16));
    const __m256i g = _mm256_add_epi32(
        yy, _mm256_srai_epi32(
                _mm256_add_epi32(_mm256_add_epi32(_mm256_mullo_epi32(u, _mm256_set1_epi32(kGCb)),
                                                  _mm256_mullo_epi32(v, _mm256_set1_epi32(kGCr))),
                                 half),
                16));
    const __m256i b = _mm256_add_epi32(
        yy, _mm256_srai_epi32(_mm256_add_epi32(_mm256_mullo_epi32(u, _mm256_set1_epi32(kBCb)), half), 16));
    alignas(16) std::uint8_t r8[8], g8[8], b8[8];
    store_u8x8(r, r8);  // packus saturates to [0,255]
    store_u8x8(g, g8);
    store_u8x8(b, b8);
    const __m128i rg = _mm_unpacklo_epi64(_mm_loadl_epi64(reinterpret_cast<const __m128i*>(r8)),
                                          _mm_loadl_epi64(reinterpret_cast<const __m128i*>(g8)));
    const __m128i bb = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(b8));
    std::uint8_t* dst = rgb + 3 * i;
    _mm_storeu_si128(reinterpret_cast<__m128i*>(dst),
                     _mm_or_si128(_mm_shuffle_epi8(rg, rg_lo), _mm_shuffle_epi8(bb, b_lo)));
    _mm_storel_epi64(reinterpret_cast<__m128i*>(dst + 16),
                     _mm_or_si128(_mm_shuffle_epi8(rg, rg_hi), _mm_shuffle_epi8(bb, b_hi)));
  }
  if (i < pixels) scalar_kernels().ycc_to_rgb(y + i, cb + i, cr + i, pixels - i, rgb + 3 * i);
}

void luma_block_sums(const std::uint8_t* row, std::size_t blocks, int channels,
                     std::int64_t* sums) {
  using namespace detail;
  if (channels == 3) {
    const __m256i wr = _mm256_set1_epi32(kLumaR);
    const __m256i wg = _mm256_set1_epi32(kLumaG);
    const __m256i wb = _mm256_set1_epi32(kLumaB);
    for (std::size_t b = 0; b < blocks; ++b) {
      __m256i r, g, bl;
      deinterleave_rgb8(row + 24 * b, r, g, bl);
      const __m256i l = _mm256_add_epi32(
          _mm256_add_epi32(_mm256_mullo_epi32(r, wr), _mm256_mullo_epi32(g, wg)),
          _mm256_mullo_epi32(bl, wb));
      sums[b] += hsum_epi32(l);
    }
  } else {
    for (std::size_t b = 0; b < blocks; ++b) {
      sums[b] += hsum_epi32(load_u8x8(row + 8 * b)) * kLumaGray;
    }
  }
}

}  // namespace

const Kernels& avx2_kernels() {
  static const Kernels k{fdct_quantize, idct_dequantize, rgb_to_ycc, ycc_to_rgb, luma_block_sums};
  return k;
}

}  // namespace etcid::simd
