// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace etcid::jpeg::detail {

struct HuffmanSpec {
  std::array<std::uint8_t, 16> counts;  // number of codes of length 1..16
  std::span<const std::uint8_t> symbols;
};

// Annex K.3 typical tables.
const HuffmanSpec& dc_luma_spec();
const HuffmanSpec& dc_chroma_spec();
const HuffmanSpec& ac_luma_spec();
const HuffmanSpec& ac_chroma_spec();

// Markers.
inline constexpr std::uint8_t kSOI = 0xD8, kEOI = 0xD9, kSOS = 0xDA, kDQT = 0xDB, kDHT = 0xC4,
                              kDRI = 0xDD, kAPP0 = 0xE0, kAPP14 = 0xEE, kCOM = 0xFE,
                              kSOF0 = 0xC0, kSOF1 = 0xC1, kRST0 = 0xD0;

}  // namespace etcid::jpeg::detail
