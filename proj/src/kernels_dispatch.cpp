#include "capfilm/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace capfilm::kernels {

bool avx2_available() {
#if defined(CAPFILM_BUILD_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

#if !defined(CAPFILM_BUILD_AVX2)
const Ops& avx2_ops() { return scalar_ops(); }
#endif

const Ops& active() {
  static const Ops* chosen = [] {
    if (const char* env = std::getenv("CAPFILM_KERNELS")) {
      if (std::strcmp(env, "scalar") == 0) return &scalar_ops();
      if (std::strcmp(env, "avx2") == 0 && avx2_available()) return &avx2_ops();
    }
    return avx2_available() ? &avx2_ops() : &scalar_ops();
  }();
  return *chosen;
}

}  // namespace capfilm::kernels
