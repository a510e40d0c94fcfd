// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "etcid/image/pixel_image.hpp"

namespace etcid::bench {

struct CorpusImage {
  std::string name;
  PixelImage pixels;
};

/// Deterministic photograph-like RGB images: multi-octave value noise with
/// per-image palette, gradient and a scatter of soft-edged shapes.
std::vector<CorpusImage> synthesize_corpus(std::size_t count, std::uint64_t seed, int width = 640,
                                           int height = 480);

/// The first `count` JPEG/PNM files of `dir` in file-name order, each cropped
/// to a multiple of 8. Throws ErrorKind::kIo if the directory is unreadable or
/// holds fewer than `count` images.
std::vector<CorpusImage> load_corpus(const std::filesystem::path& dir, std::size_t count);

}  // namespace etcid::bench
