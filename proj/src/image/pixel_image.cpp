// SPDX-License-Identifier: Apache-2.0
#include "etcid/image/pixel_image.hpp"

#include <algorithm>
#include <string>

#include "etcid/error.hpp"

namespace etcid {

PixelImage::PixelImage(int width, int height, int channels)
    : PixelImage(width, height, channels,
                 std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                           std::max(height, 0) * std::max(channels, 0))) {}

PixelImage::PixelImage(int width, int height, int channels, std::vector<std::uint8_t> samples)
    : width_(width), height_(height), channels_(channels), samples_(std::move(samples)) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorKind::kDimension, "image dimensions must be positive");
  }
  if (channels != 1 && channels != 3) {
    throw Error(ErrorKind::kInvalidArgument, "image must have 1 or 3 channels");
  }
  if (samples_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw Error(ErrorKind::kInvalidArgument, "sample buffer size does not match geometry");
  }
}

PixelImage crop_to_blocks(const PixelImage& img) {
  const int w = img.width() / 8 * 8;
  const int h = img.height() / 8 * 8;
  if (w == 0 || h == 0) {
    throw Error(ErrorKind::kDimension, "image smaller than one 8x8 block");
  }
  if (w == img.width() && h == img.height()) return img;
  PixelImage out(w, h, img.channels());
  for (int y = 0; y < h; ++y) {
    auto src = img.row(y).first(out.stride());
    std::copy(src.begin(), src.end(), out.row(y).begin());
  }
  return out;
}

void require_block_aligned(const PixelImage& img, const char* what) {
  if (!img.block_aligned() || img.empty()) {
    throw Error(ErrorKind::kDimension, std::string(what) + ": image dimensions " +
                                           std::to_string(img.width()) + "x" +
                                           std::to_string(img.height()) +
                                           " are not multiples of 8");
  }
}

}  // namespace etcid
