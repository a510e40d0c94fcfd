// SPDX-License-Identifier: Apache-2.0
//
// Baseline sequential JPEG (ITU-T T.81, Huffman, 8-bit).
//
// The encoder always writes JFIF 4:4:4 with the Annex K quantization and
// Huffman tables. The decoder accepts any baseline/extended-sequential Huffman
// stream with 1 or 3 components, restart markers and h/v sampling factors up
// to 2 (chroma is upsampled by replication); progressive, lossless and
// arithmetic-coded streams are rejected.
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "etcid/image/pixel_image.hpp"

namespace etcid::jpeg {

using JpegBytes = std::vector<std::uint8_t>;

class QualityFactor {
 public:
  /// Throws ErrorKind::kInvalidArgument outside [1, 100].
  explicit QualityFactor(int qf);
  int value() const noexcept { return qf_; }
  friend bool operator==(QualityFactor, QualityFactor) = default;

 private:
  int qf_;
};

/// 64 entries in natural (row-major) order.
using QuantTable = std::array<std::uint16_t, 64>;

const QuantTable& annex_k_luma_table();
const QuantTable& annex_k_chroma_table();

/// Standard quality scaling: s = qf < 50 ? 5000/qf : 200 - 2qf,
/// entry = clamp((base*s + 50)/100, 1, 255).
QuantTable scale_quant_table(const QuantTable& base, QualityFactor qf);

/// Zigzag position -> natural index.
const std::array<std::uint8_t, 64>& zigzag_order();

/// Throws ErrorKind::kDimension when either side is below 8.
JpegBytes encode_jpeg(const PixelImage& img, QualityFactor qf);

/// Throws ErrorKind::kFormat for malformed, truncated or unsupported streams.
PixelImage decode_jpeg(std::span<const std::uint8_t> bytes);

/// Quantization tables (natural order) declared in a stream, indexed by table id.
/// Used by tests and diagnostics.
std::vector<QuantTable> read_quant_tables(std::span<const std::uint8_t> bytes);

}  // namespace etcid::jpeg
