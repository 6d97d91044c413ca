#include <cstdlib>
#include <cstring>

#include "mixlink/simd/kernels.hpp"
#include "simd/kernels_internal.hpp"

namespace mixlink::simd {

const KernelTable* avx2_kernels() {
#if defined(MIXLINK_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable* table = [] {
    const char* forced = std::getenv("MIXLINK_SIMD");
    if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return &scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return t;
    return &scalar_kernels();
  }();
  return *table;
}

}  // namespace mixlink::simd
