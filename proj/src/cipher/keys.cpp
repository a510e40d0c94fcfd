// SPDX-License-Identifier: Apache-2.0
#include "etcid/cipher/keys.hpp"

#include <bit>

namespace etcid::cipher {

std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Xoshiro256StarStar::Xoshiro256StarStar(std::uint64_t seed) noexcept {
  for (auto& word : s_) word = splitmix64_next(seed);
}

std::uint64_t Xoshiro256StarStar::next() noexcept {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

std::uint64_t Xoshiro256StarStar::below(std::uint64_t bound) noexcept {
  // Values below (2^64 mod bound) are rejected so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t x = next();
    if (x >= threshold) return x % bound;
  }
}

Xoshiro256StarStar KeySet::stream(Stream which) const noexcept {
  const std::uint64_t seed = which == Stream::kLayer1 ? k0_ : k_;
  return Xoshiro256StarStar(seed ^ static_cast<std::uint64_t>(which));
}

}  // namespace etcid::cipher
