// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <cstdlib>
#include <string_view>

#include "etcid/error.hpp"
#include "etcid/simd/kernels.hpp"

namespace etcid::simd {
namespace {

#if defined(__x86_64__) || defined(_M_X64)
constexpr bool kHaveAvx2Build = true;
#else
constexpr bool kHaveAvx2Build = false;
#endif

Isa initial_isa() {
  if (const char* env = std::getenv("ETCIDENT_ISA"); env && std::string_view(env) == "scalar") {
    return Isa::kScalar;
  }
  return detect_isa();
}

std::atomic<Isa>& selected() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(__x86_64__) || defined(_M_X64)
      return kHaveAvx2Build && __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa detect_isa() { return isa_supported(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar; }

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

const Kernels& kernels_for(Isa isa) {
  if (!isa_supported(isa)) {
    throw Error(ErrorKind::kInvalidArgument, std::string("ISA not supported on this CPU: ") +
                                                 isa_name(isa));
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::kAvx2) return avx2_kernels();
#endif
  return scalar_kernels();
}

const Kernels& kernels() { return kernels_for(active_isa()); }

Isa active_isa() { return selected().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  kernels_for(isa);  // validates
  selected().store(isa, std::memory_order_relaxed);
}

}  // namespace etcid::simd
