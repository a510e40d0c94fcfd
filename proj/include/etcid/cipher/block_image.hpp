// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "etcid/image/pixel_image.hpp"

namespace etcid::cipher {

/// An image held as a raster-ordered sequence of 8x8 blocks. Each block stores
/// its channels planar: sample (c, y, x) at offset c*64 + y*8 + x.
class BlockImage {
 public:
  BlockImage() = default;

  /// Throws ErrorKind::kDimension unless both dimensions are multiples of 8.
  static BlockImage from_pixels(const PixelImage& img);
  PixelImage to_pixels() const;

  int grid_w() const noexcept { return grid_w_; }
  int grid_h() const noexcept { return grid_h_; }
  int channels() const noexcept { return channels_; }
  std::size_t block_count() const noexcept { return static_cast<std::size_t>(grid_w_) * grid_h_; }
  std::size_t block_size() const noexcept { return 64u * channels_; }

  std::span<std::uint8_t> block(std::size_t m) noexcept {
    return {data_.data() + m * block_size(), block_size()};
  }
  std::span<const std::uint8_t> block(std::size_t m) const noexcept {
    return {data_.data() + m * block_size(), block_size()};
  }

  friend bool operator==(const BlockImage&, const BlockImage&) = default;

 private:
  int grid_w_ = 0;
  int grid_h_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Element of the symmetry group of the square (4 rotations, optionally
/// mirrored) plus the negative-positive bit.
struct BlockTransform {
  int dihedral = 0;  // 0..7: bit 2 = mirror, bits 0-1 = quarter turns
  bool negpos = false;

  friend bool operator==(const BlockTransform&, const BlockTransform&) = default;
};

/// Sample index table of a dihedral element: output[p] = input[table[p]].
const std::array<std::uint8_t, 64>& dihedral_source(int dihedral);
/// Index table of the inverse element.
const std::array<std::uint8_t, 64>& dihedral_inverse_source(int dihedral);

/// Rearranges every channel of `block` (64*channels samples) in place.
void apply_dihedral(std::span<std::uint8_t> block, int dihedral);
void undo_dihedral(std::span<std::uint8_t> block, int dihedral);

/// sample -> 255 - sample.
void negate_block(std::span<std::uint8_t> block);

void apply_transform(std::span<std::uint8_t> block, BlockTransform t);
void undo_transform(std::span<std::uint8_t> block, BlockTransform t);

}  // namespace etcid::cipher
