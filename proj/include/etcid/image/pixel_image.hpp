// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace etcid {

/// 8-bit image with 1 (grayscale) or 3 (RGB) interleaved channels, row-major.
class PixelImage {
 public:
  PixelImage() = default;
  PixelImage(int width, int height, int channels);
  PixelImage(int width, int height, int channels, std::vector<std::uint8_t> samples);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return samples_.empty(); }

  std::size_t stride() const noexcept { return static_cast<std::size_t>(width_) * channels_; }

  std::span<std::uint8_t> samples() noexcept { return samples_; }
  std::span<const std::uint8_t> samples() const noexcept { return samples_; }

  std::span<std::uint8_t> row(int y) noexcept { return {samples_.data() + y * stride(), stride()}; }
  std::span<const std::uint8_t> row(int y) const noexcept {
    return {samples_.data() + y * stride(), stride()};
  }

  std::uint8_t& at(int x, int y, int c) noexcept { return samples_[y * stride() + x * channels_ + c]; }
  std::uint8_t at(int x, int y, int c) const noexcept {
    return samples_[y * stride() + x * channels_ + c];
  }

  /// Number of whole 8x8 blocks horizontally / vertically.
  int blocks_across() const noexcept { return width_ / 8; }
  int blocks_down() const noexcept { return height_ / 8; }
  std::size_t block_count() const noexcept {
    return static_cast<std::size_t>(blocks_across()) * blocks_down();
  }
  bool block_aligned() const noexcept { return width_ % 8 == 0 && height_ % 8 == 0; }

  friend bool operator==(const PixelImage&, const PixelImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> samples_;
};

/// Top-left crop to the largest multiple-of-8 size.
PixelImage crop_to_blocks(const PixelImage& img);

/// Throws ErrorKind::kDimension unless both dimensions are multiples of 8.
void require_block_aligned(const PixelImage& img, const char* what);

}  // namespace etcid
