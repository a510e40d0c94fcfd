// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace etcid::simd::detail {

// basis[u][x] = c(u)/2 * cos((2x+1) u pi / 16), c(0) = 1/sqrt(2), c(u>0) = 1.
// transposed[x][u] = basis[u][x]. Both stored row-major, float.
struct DctMatrix {
  alignas(32) std::array<float, 64> basis;
  alignas(32) std::array<float, 64> transposed;
};

inline const DctMatrix& dct_matrix() {
  static const DctMatrix m = [] {
    DctMatrix out{};
    for (int u = 0; u < 8; ++u) {
      const double cu = u == 0 ? std::numbers::sqrt2 / 2.0 : 1.0;
      for (int x = 0; x < 8; ++x) {
        const double v = cu / 2.0 * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
        out.basis[u * 8 + x] = static_cast<float>(v);
        out.transposed[x * 8 + u] = static_cast<float>(v);
      }
    }
    return out;
  }();
  return m;
}

// Fixed-point colour constants (16 fractional bits), JFIF full range.
inline constexpr int kYR = 19595, kYG = 38470, kYB = 7471;
inline constexpr int kCbR = -11059, kCbG = -21709, kCbB = 32768;
inline constexpr int kCrR = 32768, kCrG = -27439, kCrB = -5329;
inline constexpr int kChromaBias = (128 << 16) + 32767;
inline constexpr int kRCr = 91881, kGCb = -22554, kGCr = -46802, kBCb = 116130;
inline constexpr int kHalf = 1 << 15;

inline constexpr int kLumaR = 299, kLumaG = 587, kLumaB = 114, kLumaGray = 1000;

}  // namespace etcid::simd::detail
