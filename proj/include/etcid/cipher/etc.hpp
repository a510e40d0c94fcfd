// SPDX-License-Identifier: Apache-2.0
//
// Two-layer block-scrambling encryption in the spatial domain.
//
// encrypt = layer-1 shuffle of all M blocks (K0)
//         -> layer-2 shuffle of blocks N..M-1 (K1)
//         -> per block: dihedral element (K2), then optional complement (K3).
//
// With k0 and N fixed, changing k leaves the source block at each of the first
// N positions unchanged; only its orientation and polarity differ.
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "etcid/cipher/block_image.hpp"
#include "etcid/cipher/keys.hpp"
#include "etcid/image/pixel_image.hpp"

namespace etcid::cipher {

struct EncryptionParams {
  std::size_t n_fixed = 1;

  /// floor(M/10), at least 1.
  static EncryptionParams default_for(std::size_t block_count);
};

/// Throws ErrorKind::kInvalidArgument unless 1 <= N <= M.
void validate(const EncryptionParams& params, std::size_t block_count);

using Permutation = std::vector<std::uint32_t>;

/// Fisher-Yates over [0, M): for i = M-1 .. 1, swap(a[i], a[below(i+1)]).
Permutation layer1_permutation(const KeySet& keys, std::size_t block_count);
/// Identity on [0, N), Fisher-Yates over [N, M) driven by K1.
Permutation layer2_permutation(const KeySet& keys, std::size_t block_count, std::size_t n_fixed);
/// Per-position transforms: dihedral = K2.below(8), negpos = top bit of K3, raster order.
std::vector<BlockTransform> block_transforms(const KeySet& keys, std::size_t block_count);

/// out.block(i) = in.block(perm[i]).
BlockImage apply_permutation(const BlockImage& img, const Permutation& perm);
/// Inverse of apply_permutation: out.block(perm[i]) = in.block(i).
BlockImage invert_permutation(const BlockImage& img, const Permutation& perm);

BlockImage permute_layer1(const BlockImage& img, const KeySet& keys);
BlockImage permute_layer2(const BlockImage& img, const KeySet& keys, const EncryptionParams& params);
BlockImage apply_block_transforms(const BlockImage& img, const KeySet& keys);
BlockImage undo_block_transforms(const BlockImage& img, const KeySet& keys);

PixelImage encrypt(const PixelImage& img, const KeySet& keys, const EncryptionParams& params);
PixelImage decrypt(const PixelImage& img, const KeySet& keys, const EncryptionParams& params);

/// decrypt with keys_old, encrypt with keys_new. Both must share k0
/// (ErrorKind::kKey otherwise).
PixelImage re_encrypt(const PixelImage& img, const KeySet& keys_old, const KeySet& keys_new,
                      const EncryptionParams& params);

}  // namespace etcid::cipher
