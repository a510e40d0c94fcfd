// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "etcid/image/pixel_image.hpp"

namespace etcid::jpeg {

inline constexpr int kMinDc = -1024;
inline constexpr int kMaxDc = 1016;

/// Luminance DC of every 8x8 block, raster order.
struct DcVector {
  int blocks_across = 0;
  int blocks_down = 0;
  std::vector<int> values;

  std::size_t size() const noexcept { return values.size(); }
};

/// DC = (1/8) * sum over the block of (Y - 128), where Y is the BT.601 luma
/// 0.299R + 0.587G + 0.114B (or the sample itself for grayscale).
///
/// `luma_sum` is the block's sum of luma numerators in thousandths
/// (sum of 299R + 587G + 114B, or 1000*I). The exact quotient is truncated
/// toward -4, the fixed point of DC -> -DC - 8, so that complementing every
/// sample maps DC to exactly -DC - 8 and multiples of 1/8 are kept exact.
constexpr int dc_from_luma_sum(std::int64_t luma_sum) {
  // (sum/1000 - 64*128) / 8 + 4 == (sum - 8'160'000) / 8000
  const std::int64_t centered = luma_sum - 8'160'000;
  return static_cast<int>(centered / 8000) - 4;
}

/// Throws ErrorKind::kDimension unless width and height are multiples of 8.
DcVector extract_dc_luma(const PixelImage& img);

}  // namespace etcid::jpeg
