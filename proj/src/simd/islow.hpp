// SPDX-License-Identifier: Apache-2.0
//
// 1-D pass of the accurate integer inverse DCT used by the IJG "islow" method
// (Loeffler-Ligtenberg-Moschytz, 13-bit constants). Generic over a lane type
// providing add, sub, mul (by int32, wrapping) and sra<N>. Lives in an unnamed
// namespace so the AVX2 translation unit gets its own copy.
#pragma once

#include <cstdint>

namespace etcid::simd::detail {
namespace {

constexpr int kConstBits = 13;
constexpr int kPass1Bits = 2;
constexpr int kPass1Shift = kConstBits - kPass1Bits;
constexpr int kPass2Shift = kConstBits + kPass1Bits + 3;

constexpr std::int32_t kFix0_298631336 = 2446;
constexpr std::int32_t kFix0_390180644 = 3196;
constexpr std::int32_t kFix0_541196100 = 4433;
constexpr std::int32_t kFix0_765366865 = 6270;
constexpr std::int32_t kFix0_899976223 = 7373;
constexpr std::int32_t kFix1_175875602 = 9633;
constexpr std::int32_t kFix1_501321110 = 12299;
constexpr std::int32_t kFix1_847759065 = 15137;
constexpr std::int32_t kFix1_961570560 = 16069;
constexpr std::int32_t kFix2_053119869 = 16819;
constexpr std::int32_t kFix2_562915447 = 20995;
constexpr std::int32_t kFix3_072711026 = 25172;

// v[k] holds frequency k on entry and sample k on exit, descaled by Shift.
template <int Shift, class V>
inline void islow_1d(V (&v)[8], V round) {
  V z2 = v[2];
  V z3 = v[6];
  V z1 = mul(add(z2, z3), kFix0_541196100);
  V tmp2 = add(z1, mul(z3, -kFix1_847759065));
  V tmp3 = add(z1, mul(z2, kFix0_765366865));

  V tmp0 = mul(add(v[0], v[4]), 1 << kConstBits);
  V tmp1 = mul(sub(v[0], v[4]), 1 << kConstBits);
  tmp0 = add(tmp0, round);
  tmp1 = add(tmp1, round);

  const V tmp10 = add(tmp0, tmp3);
  const V tmp13 = sub(tmp0, tmp3);
  const V tmp11 = add(tmp1, tmp2);
  const V tmp12 = sub(tmp1, tmp2);

  tmp0 = v[7];
  tmp1 = v[5];
  tmp2 = v[3];
  tmp3 = v[1];
  z1 = add(tmp0, tmp3);
  z2 = add(tmp1, tmp2);
  z3 = add(tmp0, tmp2);
  V z4 = add(tmp1, tmp3);
  const V z5 = mul(add(z3, z4), kFix1_175875602);

  tmp0 = mul(tmp0, kFix0_298631336);
  tmp1 = mul(tmp1, kFix2_053119869);
  tmp2 = mul(tmp2, kFix3_072711026);
  tmp3 = mul(tmp3, kFix1_501321110);
  z1 = mul(z1, -kFix0_899976223);
  z2 = mul(z2, -kFix2_562915447);
  z3 = add(mul(z3, -kFix1_961570560), z5);
  z4 = add(mul(z4, -kFix0_390180644), z5);

  tmp0 = add(tmp0, add(z1, z3));
  tmp1 = add(tmp1, add(z2, z4));
  tmp2 = add(tmp2, add(z2, z3));
  tmp3 = add(tmp3, add(z1, z4));

  v[0] = sra<Shift>(add(tmp10, tmp3));
  v[7] = sra<Shift>(sub(tmp10, tmp3));
  v[1] = sra<Shift>(add(tmp11, tmp2));
  v[6] = sra<Shift>(sub(tmp11, tmp2));
  v[2] = sra<Shift>(add(tmp12, tmp1));
  v[5] = sra<Shift>(sub(tmp12, tmp1));
  v[3] = sra<Shift>(add(tmp13, tmp0));
  v[4] = sra<Shift>(sub(tmp13, tmp0));
}

}  // namespace
}  // namespace etcid::simd::detail
