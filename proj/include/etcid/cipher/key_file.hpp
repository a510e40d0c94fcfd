// SPDX-License-Identifier: Apache-2.0
//
// Key file: three "name=value" lines, unsigned decimal, any order:
//
//   k0=<uint64>
//   k=<uint64>
//   n=<N>
//
// Blank lines and lines starting with '#' are ignored.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "etcid/cipher/etc.hpp"
#include "etcid/cipher/keys.hpp"

namespace etcid::cipher {

struct KeyRecord {
  std::uint64_t k0 = 0;
  std::uint64_t k = 0;
  std::size_t n_fixed = 0;

  KeySet keys() const noexcept { return KeySet(k0, k); }
  EncryptionParams params() const noexcept { return {n_fixed}; }
  friend bool operator==(const KeyRecord&, const KeyRecord&) = default;
};

/// Strict unsigned 64-bit decimal; throws ErrorKind::kKey.
std::uint64_t parse_seed(std::string_view text);

std::string format_key_record(const KeyRecord& record);
KeyRecord parse_key_record(std::string_view text);

void write_key_file(const std::filesystem::path& path, const KeyRecord& record);
KeyRecord read_key_file(const std::filesystem::path& path);

}  // namespace etcid::cipher
