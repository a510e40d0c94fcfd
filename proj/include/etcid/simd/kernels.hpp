// SPDX-License-Identifier: Apache-2.0
//
// Data-parallel inner loops of the codec and the DC extractor. Every kernel has
// a portable scalar reference and, where the CPU allows, an AVX2 variant. The
// variants are required to be bit-identical to the scalar reference: integer
// kernels wrap identically and float kernels accumulate in the same order with separate multiply and add (the
// project is compiled with -ffp-contract=off).
#pragma once

#include <cstddef>
#include <cstdint>

namespace etcid::simd {

enum class Isa { kScalar, kAvx2 };

struct Kernels {
  /// Forward 8x8 DCT-II of a level-shifted block (row-major), then division by
  /// `divisors` and round-half-even. Output in natural (row-major) order.
  void (*fdct_quantize)(const float* block, const float* divisors, std::int16_t* out);

  /// Dequantize, accurate integer inverse DCT (IJG islow arithmetic), add 128,
  /// clamp to [0,255].
  void (*idct_dequantize)(const std::int16_t* coefs, const std::int32_t* qtable, std::uint8_t* out);

  /// JFIF full-range RGB -> YCbCr, 16-bit fixed point.
  void (*rgb_to_ycc)(const std::uint8_t* rgb, std::size_t pixels, std::uint8_t* y,
                     std::uint8_t* cb, std::uint8_t* cr);

  /// JFIF full-range YCbCr -> RGB, 16-bit fixed point, clamped.
  void (*ycc_to_rgb)(const std::uint8_t* y, const std::uint8_t* cb, const std::uint8_t* cr,
                     std::size_t pixels, std::uint8_t* rgb);

  /// Adds the BT.601 luma numerators (299R + 587G + 114B, or 1000*I for
  /// grayscale) of one pixel row into per-block accumulators, 8 pixels per block.
  void (*luma_block_sums)(const std::uint8_t* row, std::size_t blocks, int channels,
                          std::int64_t* sums);
};

const Kernels& scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
const Kernels& avx2_kernels();
#endif

bool isa_supported(Isa isa);
Isa detect_isa();
const char* isa_name(Isa isa);

/// Kernel table for a specific ISA; throws if the CPU lacks it.
const Kernels& kernels_for(Isa isa);

/// Currently selected kernels. The default is the best detected ISA unless the
/// environment variable ETCIDENT_ISA=scalar forces the reference path.
const Kernels& kernels();
Isa active_isa();

/// Switches the process-wide selection. Intended for tests and benchmarks.
void set_active_isa(Isa isa);

}  // namespace etcid::simd
