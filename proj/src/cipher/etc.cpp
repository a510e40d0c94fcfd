// SPDX-License-Identifier: Apache-2.0
#include "etcid/cipher/etc.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "etcid/error.hpp"

namespace etcid::cipher {
namespace {

void shuffle(std::span<std::uint32_t> items, Xoshiro256StarStar& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(items[i - 1], items[j]);
  }
}

Permutation identity(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0u);
  return p;
}

void check_size(const BlockImage& img, const Permutation& perm) {
  if (perm.size() != img.block_count()) {
    throw Error(ErrorKind::kInvalidArgument, "permutation size does not match block count");
  }
}

}  // namespace

EncryptionParams EncryptionParams::default_for(std::size_t block_count) {
  return {std::max<std::size_t>(1, block_count / 10)};
}

void validate(const EncryptionParams& params, std::size_t block_count) {
  if (params.n_fixed < 1 || params.n_fixed > block_count) {
    throw Error(ErrorKind::kInvalidArgument, "N must be in [1, M]; got N=" +
                                                 std::to_string(params.n_fixed) +
                                                 ", M=" + std::to_string(block_count));
  }
}

Permutation layer1_permutation(const KeySet& keys, std::size_t block_count) {
  auto perm = identity(block_count);
  auto rng = keys.stream(Stream::kLayer1);
  shuffle(perm, rng);
  return perm;
}

Permutation layer2_permutation(const KeySet& keys, std::size_t block_count, std::size_t n_fixed) {
  validate({n_fixed}, block_count);
  auto perm = identity(block_count);
  auto rng = keys.stream(Stream::kLayer2);
  shuffle(std::span(perm).subspan(n_fixed), rng);
  return perm;
}

std::vector<BlockTransform> block_transforms(const KeySet& keys, std::size_t block_count) {
  std::vector<BlockTransform> out(block_count);
  auto dihedral = keys.stream(Stream::kDihedral);
  for (auto& t : out) t.dihedral = static_cast<int>(dihedral.below(8));
  auto negpos = keys.stream(Stream::kNegPos);
  for (auto& t : out) t.negpos = (negpos.next() >> 63) != 0;
  return out;
}

BlockImage apply_permutation(const BlockImage& img, const Permutation& perm) {
  check_size(img, perm);
  BlockImage out = img;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    auto src = img.block(perm[i]);
    std::copy(src.begin(), src.end(), out.block(i).begin());
  }
  return out;
}

BlockImage invert_permutation(const BlockImage& img, const Permutation& perm) {
  check_size(img, perm);
  BlockImage out = img;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    auto src = img.block(i);
    std::copy(src.begin(), src.end(), out.block(perm[i]).begin());
  }
  return out;
}

BlockImage permute_layer1(const BlockImage& img, const KeySet& keys) {
  return apply_permutation(img, layer1_permutation(keys, img.block_count()));
}

BlockImage permute_layer2(const BlockImage& img, const KeySet& keys, const EncryptionParams& params) {
  return apply_permutation(img, layer2_permutation(keys, img.block_count(), params.n_fixed));
}

BlockImage apply_block_transforms(const BlockImage& img, const KeySet& keys) {
  BlockImage out = img;
  const auto transforms = block_transforms(keys, img.block_count());
  for (std::size_t m = 0; m < transforms.size(); ++m) apply_transform(out.block(m), transforms[m]);
  return out;
}

BlockImage undo_block_transforms(const BlockImage& img, const KeySet& keys) {
  BlockImage out = img;
  const auto transforms = block_transforms(keys, img.block_count());
  for (std::size_t m = 0; m < transforms.size(); ++m) undo_transform(out.block(m), transforms[m]);
  return out;
}

PixelImage encrypt(const PixelImage& img, const KeySet& keys, const EncryptionParams& params) {
  auto blocks = BlockImage::from_pixels(img);
  validate(params, blocks.block_count());
  blocks = permute_layer1(blocks, keys);
  blocks = permute_layer2(blocks, keys, params);
  blocks = apply_block_transforms(blocks, keys);
  return blocks.to_pixels();
}

PixelImage decrypt(const PixelImage& img, const KeySet& keys, const EncryptionParams& params) {
  auto blocks = BlockImage::from_pixels(img);
  const std::size_t m = blocks.block_count();
  validate(params, m);
  blocks = undo_block_transforms(blocks, keys);
  blocks = invert_permutation(blocks, layer2_permutation(keys, m, params.n_fixed));
  blocks = invert_permutation(blocks, layer1_permutation(keys, m));
  return blocks.to_pixels();
}

PixelImage re_encrypt(const PixelImage& img, const KeySet& keys_old, const KeySet& keys_new,
                      const EncryptionParams& params) {
  if (keys_old.k0() != keys_new.k0()) {
    throw Error(ErrorKind::kKey, "re-encryption requires the same k0 seed");
  }
  return encrypt(decrypt(img, keys_old, params), keys_new, params);
}

}  // namespace etcid::cipher
