// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "etcid/image/pixel_image.hpp"

namespace etcid {

/// Binary PGM (P5) / PPM (P6), maxval 255.
PixelImage decode_pnm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pnm(const PixelImage& img);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Decodes a JPEG or PNM file, chosen by signature.
PixelImage load_image(const std::filesystem::path& path);

}  // namespace etcid
