// SPDX-License-Identifier: Apache-2.0
#include "etcid/feature/manifest.hpp"

#include "etcid/error.hpp"
#include "etcid/image/pnm.hpp"

namespace etcid::feature {

std::string format_manifest(const std::vector<ManifestRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    nlohmann::ordered_json line;
    line["id"] = r.id;
    line["image"] = r.image_path;
    line["feature"] = r.feature_path;
    line["origin"] = r.origin;
    line["meta"] = r.meta;
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::vector<ManifestRecord> parse_manifest(std::string_view text) {
  std::vector<ManifestRecord> records;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const auto line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ManifestRecord r;
      r.id = j.at("id").get<std::string>();
      r.image_path = j.value("image", std::string{});
      r.feature_path = j.at("feature").get<std::string>();
      r.origin = j.value("origin", -1L);
      r.meta = j.value("meta", nlohmann::json::object());
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kFormat,
                  "manifest line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRecord>& records) {
  const auto text = format_manifest(records);
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_manifest(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

std::filesystem::path resolve_manifest_path(const std::filesystem::path& manifest,
                                            const std::string& relative) {
  const std::filesystem::path p(relative);
  if (p.is_absolute()) return p;
  return manifest.parent_path() / p;
}

}  // namespace etcid::feature
