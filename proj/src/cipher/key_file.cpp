// SPDX-License-Identifier: Apache-2.0
#include "etcid/cipher/key_file.hpp"

#include <charconv>
#include <optional>
#include <sstream>

#include "etcid/error.hpp"
#include "etcid/image/pnm.hpp"

namespace etcid::cipher {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::uint64_t parse_seed(std::string_view text) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value, 10);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::kKey, "invalid seed '" + std::string(text) +
                                     "': expected an unsigned 64-bit decimal integer");
  }
  return value;
}

std::string format_key_record(const KeyRecord& record) {
  std::ostringstream out;
  out << "k0=" << record.k0 << "\nk=" << record.k << "\nn=" << record.n_fixed << "\n";
  return out.str();
}

KeyRecord parse_key_record(std::string_view text) {
  std::optional<std::uint64_t> k0, k, n;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const auto line = trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kKey, "key file: expected name=value, got '" + std::string(line) + "'");
    }
    const auto name = trim(line.substr(0, eq));
    const auto value = parse_seed(line.substr(eq + 1));
    std::optional<std::uint64_t>* slot = name == "k0" ? &k0 : name == "k" ? &k : name == "n" ? &n : nullptr;
    if (!slot) throw Error(ErrorKind::kKey, "key file: unknown field '" + std::string(name) + "'");
    if (slot->has_value()) {
      throw Error(ErrorKind::kKey, "key file: duplicate field '" + std::string(name) + "'");
    }
    *slot = value;
  }
  if (!k0 || !k || !n) throw Error(ErrorKind::kKey, "key file: k0, k and n are all required");
  if (*n == 0) throw Error(ErrorKind::kKey, "key file: n must be positive");
  return {*k0, *k, static_cast<std::size_t>(*n)};
}

void write_key_file(const std::filesystem::path& path, const KeyRecord& record) {
  const auto text = format_key_record(record);
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

KeyRecord read_key_file(const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes;
  try {
    bytes = read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorKind::kKey, std::string("key file: ") + e.what());
  }
  return parse_key_record(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace etcid::cipher
