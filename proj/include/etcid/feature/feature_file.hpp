// SPDX-License-Identifier: Apache-2.0
//
// ETCF binary feature file:
//
//   offset 0  "ETCF"               4 bytes
//   offset 4  version = 1          1 byte
//   offset 5  N                    uint32 little-endian
//   offset 9  values[0..N)         uint16 little-endian each
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace etcid::feature {

inline constexpr std::uint8_t kFeatureFileVersion = 1;

std::vector<std::uint8_t> encode_feature_file(std::span<const std::uint16_t> values);
/// Throws ErrorKind::kFormat on bad magic, version or length.
std::vector<std::uint16_t> decode_feature_file(std::span<const std::uint8_t> bytes);

void write_feature_file(const std::filesystem::path& path, std::span<const std::uint16_t> values);
std::vector<std::uint16_t> read_feature_file(const std::filesystem::path& path);

/// One decimal value per line.
std::string feature_to_text(std::span<const std::uint16_t> values);

}  // namespace etcid::feature
