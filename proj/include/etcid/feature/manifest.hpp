// SPDX-License-Identifier: Apache-2.0
//
// Database manifest: one JSON object per line,
//
//   {"id": "...", "image": "...", "feature": "...", "origin": 7, "meta": {...}}
//
// Relative paths are resolved against the manifest's directory. "meta" carries
// generation metadata and is passed through unchanged.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace etcid::feature {

struct ManifestRecord {
  std::string id;
  std::string image_path;
  std::string feature_path;
  long origin = -1;
  nlohmann::json meta = nlohmann::json::object();

  friend bool operator==(const ManifestRecord&, const ManifestRecord&) = default;
};

std::string format_manifest(const std::vector<ManifestRecord>& records);
/// Throws ErrorKind::kFormat with the offending line number.
std::vector<ManifestRecord> parse_manifest(std::string_view text);

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRecord>& records);
std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path);

/// `relative` interpreted against the directory holding `manifest`.
std::filesystem::path resolve_manifest_path(const std::filesystem::path& manifest,
                                            const std::string& relative);

}  // namespace etcid::feature
