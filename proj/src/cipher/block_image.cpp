// SPDX-License-Identifier: Apache-2.0
#include "etcid/cipher/block_image.hpp"

#include <algorithm>
#include <utility>

#include "etcid/error.hpp"

namespace etcid::cipher {
namespace {

struct DihedralTables {
  std::array<std::array<std::uint8_t, 64>, 8> source;
  std::array<std::array<std::uint8_t, 64>, 8> inverse;
};

const DihedralTables& dihedral_tables() {
  static const DihedralTables t = [] {
    DihedralTables out{};
    for (int d = 0; d < 8; ++d) {
      for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
          int sx = (d & 4) ? 7 - x : x;
          int sy = y;
          for (int r = 0; r < (d & 3); ++r) {
            const int nx = sy;
            sy = 7 - sx;
            sx = nx;
          }
          const int p = y * 8 + x;
          const int s = sy * 8 + sx;
          out.source[d][p] = static_cast<std::uint8_t>(s);
          out.inverse[d][s] = static_cast<std::uint8_t>(p);
        }
      }
    }
    return out;
  }();
  return t;
}

void check_dihedral(int d) {
  if (d < 0 || d > 7) throw Error(ErrorKind::kInvalidArgument, "dihedral index must be in [0, 7]");
}

void remap(std::span<std::uint8_t> block, const std::array<std::uint8_t, 64>& source) {
  std::array<std::uint8_t, 64> tmp;
  for (std::size_t c = 0; c + 64 <= block.size(); c += 64) {
    auto plane = block.subspan(c, 64);
    for (int p = 0; p < 64; ++p) tmp[p] = plane[source[p]];
    std::copy(tmp.begin(), tmp.end(), plane.begin());
  }
}

}  // namespace

BlockImage BlockImage::from_pixels(const PixelImage& img) {
  require_block_aligned(img, "BlockImage");
  BlockImage out;
  out.grid_w_ = img.blocks_across();
  out.grid_h_ = img.blocks_down();
  out.channels_ = img.channels();
  out.data_.resize(out.block_count() * out.block_size());
  const int nc = img.channels();
  for (int by = 0; by < out.grid_h_; ++by) {
    for (int bx = 0; bx < out.grid_w_; ++bx) {
      auto blk = out.block(static_cast<std::size_t>(by) * out.grid_w_ + bx);
      for (int y = 0; y < 8; ++y) {
        const std::uint8_t* src = img.row(by * 8 + y).data() + bx * 8 * nc;
        for (int x = 0; x < 8; ++x) {
          for (int c = 0; c < nc; ++c) blk[c * 64 + y * 8 + x] = src[x * nc + c];
        }
      }
    }
  }
  return out;
}

PixelImage BlockImage::to_pixels() const {
  PixelImage img(grid_w_ * 8, grid_h_ * 8, channels_);
  const int nc = channels_;
  for (int by = 0; by < grid_h_; ++by) {
    for (int bx = 0; bx < grid_w_; ++bx) {
      auto blk = block(static_cast<std::size_t>(by) * grid_w_ + bx);
      for (int y = 0; y < 8; ++y) {
        std::uint8_t* dst = img.row(by * 8 + y).data() + bx * 8 * nc;
        for (int x = 0; x < 8; ++x) {
          for (int c = 0; c < nc; ++c) dst[x * nc + c] = blk[c * 64 + y * 8 + x];
        }
      }
    }
  }
  return img;
}

const std::array<std::uint8_t, 64>& dihedral_source(int dihedral) {
  check_dihedral(dihedral);
  return dihedral_tables().source[dihedral];
}

const std::array<std::uint8_t, 64>& dihedral_inverse_source(int dihedral) {
  check_dihedral(dihedral);
  return dihedral_tables().inverse[dihedral];
}

void apply_dihedral(std::span<std::uint8_t> block, int dihedral) {
  if (dihedral != 0) remap(block, dihedral_source(dihedral));
}

void undo_dihedral(std::span<std::uint8_t> block, int dihedral) {
  if (dihedral != 0) remap(block, dihedral_inverse_source(dihedral));
}

void negate_block(std::span<std::uint8_t> block) {
  for (auto& s : block) s = static_cast<std::uint8_t>(255 - s);
}

void apply_transform(std::span<std::uint8_t> block, BlockTransform t) {
  apply_dihedral(block, t.dihedral);
  if (t.negpos) negate_block(block);
}

void undo_transform(std::span<std::uint8_t> block, BlockTransform t) {
  if (t.negpos) negate_block(block);
  undo_dihedral(block, t.dihedral);
}

}  // namespace etcid::cipher
