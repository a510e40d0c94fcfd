// SPDX-License-Identifier: Apache-2.0
#include "etcid/feature/feature_file.hpp"

#include <algorithm>

#include "etcid/error.hpp"
#include "etcid/image/pnm.hpp"

namespace etcid::feature {

namespace {
constexpr std::uint8_t kMagic[4] = {'E', 'T', 'C', 'F'};
constexpr std::size_t kHeaderSize = 9;
}  // namespace

std::vector<std::uint8_t> encode_feature_file(std::span<const std::uint16_t> values) {
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  out.push_back(kFeatureFileVersion);
  const auto n = static_cast<std::uint32_t>(values.size());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
  for (const auto v : values) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
  }
  return out;
}

std::vector<std::uint16_t> decode_feature_file(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize || !std::equal(kMagic, kMagic + 4, bytes.begin())) {
    throw Error(ErrorKind::kFormat, "feature file: missing ETCF header");
  }
  if (bytes[4] != kFeatureFileVersion) {
    throw Error(ErrorKind::kFormat, "feature file: unsupported version " + std::to_string(bytes[4]));
  }
  std::uint32_t n = 0;
  for (int i = 0; i < 4; ++i) n |= static_cast<std::uint32_t>(bytes[5 + i]) << (8 * i);
  if (bytes.size() != kHeaderSize + 2ull * n) {
    throw Error(ErrorKind::kFormat, "feature file: length does not match N=" + std::to_string(n));
  }
  std::vector<std::uint16_t> values(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    values[i] = static_cast<std::uint16_t>(bytes[kHeaderSize + 2 * i] | (bytes[kHeaderSize + 2 * i + 1] << 8));
  }
  return values;
}

void write_feature_file(const std::filesystem::path& path, std::span<const std::uint16_t> values) {
  write_file(path, encode_feature_file(values));
}

std::vector<std::uint16_t> read_feature_file(const std::filesystem::path& path) {
  return decode_feature_file(read_file(path));
}

std::string feature_to_text(std::span<const std::uint16_t> values) {
  std::string out;
  for (const auto v : values) {
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

}  // namespace etcid::feature
