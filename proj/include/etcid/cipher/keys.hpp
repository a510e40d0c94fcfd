// SPDX-License-Identifier: Apache-2.0
//
// Key streams for the block-scrambling cipher.
//
// Each stream is an xoshiro256** generator whose state is filled by four
// splitmix64 steps started at (seed XOR tag), with one fixed tag per stream:
//
//   K0 (layer-1 shuffle)   <- k0
//   K1 (layer-2 shuffle)   <- k
//   K2 (dihedral indices)  <- k
//   K3 (negative-positive) <- k
//
// These are not cryptographic generators.
#pragma once

#include <array>
#include <cstdint>

namespace etcid::cipher {

std::uint64_t splitmix64_next(std::uint64_t& state) noexcept;

class Xoshiro256StarStar {
 public:
  explicit Xoshiro256StarStar(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;

  /// Uniform integer in [0, bound) by rejection of the low remainder band.
  std::uint64_t below(std::uint64_t bound) noexcept;

  const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }
  friend bool operator==(const Xoshiro256StarStar&, const Xoshiro256StarStar&) = default;

 private:
  std::array<std::uint64_t, 4> s_;
};

enum class Stream : std::uint64_t {
  kLayer1 = 0x4b30'6c61'7965'7231ull,     // "K0layer1"
  kLayer2 = 0x4b31'6c61'7965'7232ull,     // "K1layer2"
  kDihedral = 0x4b32'6469'6865'6472ull,   // "K2dihedr"
  kNegPos = 0x4b33'6e65'6770'6f73ull,     // "K3negpos"
};

/// Seeds k0 (shared layer) and k (changeable layer).
class KeySet {
 public:
  KeySet(std::uint64_t k0, std::uint64_t k) noexcept : k0_(k0), k_(k) {}

  std::uint64_t k0() const noexcept { return k0_; }
  std::uint64_t k() const noexcept { return k_; }

  /// A fresh generator positioned at the start of the stream.
  Xoshiro256StarStar stream(Stream which) const noexcept;

  friend bool operator==(const KeySet&, const KeySet&) = default;

 private:
  std::uint64_t k0_;
  std::uint64_t k_;
};

inline KeySet derive_keys(std::uint64_t k0, std::uint64_t k) noexcept { return KeySet(k0, k); }

}  // namespace etcid::cipher
