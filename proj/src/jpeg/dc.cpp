// SPDX-License-Identifier: Apache-2.0
#include "etcid/jpeg/dc.hpp"

#include "etcid/simd/kernels.hpp"

namespace etcid::jpeg {

DcVector extract_dc_luma(const PixelImage& img) {
  require_block_aligned(img, "extract_dc_luma");
  DcVector out;
  out.blocks_across = img.blocks_across();
  out.blocks_down = img.blocks_down();
  out.values.resize(img.block_count());

  const auto& k = simd::kernels();
  std::vector<std::int64_t> sums(out.blocks_across);
  for (int by = 0; by < out.blocks_down; ++by) {
    std::fill(sums.begin(), sums.end(), 0);
    for (int y = 0; y < 8; ++y) {
      k.luma_block_sums(img.row(by * 8 + y).data(), sums.size(), img.channels(), sums.data());
    }
    for (int bx = 0; bx < out.blocks_across; ++bx) {
      out.values[static_cast<std::size_t>(by) * out.blocks_across + bx] = dc_from_luma_sum(sums[bx]);
    }
  }
  return out;
}

}  // namespace etcid::jpeg
