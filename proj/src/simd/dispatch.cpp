#include <cstdlib>
#include <string_view>

#include "tauforge/simd/kernels.hpp"

namespace tauforge::simd {

namespace {

const KernelTable& pick() {
  const char* forced = std::getenv("TAUFORGE_ISA");
  if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_kernels();
  if (const KernelTable* avx2 = avx2_kernels()) return *avx2;
  return scalar_kernels();
}

}  // namespace

const KernelTable& kernels() {
  static const KernelTable& chosen = pick();
  return chosen;
}

}  // namespace tauforge::simd
