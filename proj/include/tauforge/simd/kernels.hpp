#pragma once

// Inner loops shared by the Legendre scan, the aligned min-plus convolution and
// the (tau) functional. Each kernel has a scalar reference and an AVX2 variant;
// both round identically (no fused multiply-add), so results match bit for bit.

#include <cstddef>
#include <cstdint>

namespace tauforge::simd {

struct ArgMax {
  double value;
  std::size_t index;  // n when every term is -inf
};

struct KernelTable {
  const char* name;
  /// min_j (a[j] + b[j]); +inf for n == 0.
  double (*min_plus)(const double* a, const double* b, std::size_t n);
  /// argmax_j (s * y[j] - f[j]); ties go to the smallest j.
  ArgMax (*max_affine)(const double* y, const double* f, double s, std::size_t n);
  /// out[j] = (lo[j] + theta * (hi[j] - lo[j])) + f[j]; returns min_j out[j].
  double (*blend_add_min)(const double* lo, const double* hi, double theta, const double* f,
                          double* out, std::size_t n);
  /// Writes the indices j with v[j] <= threshold to idx in increasing order; returns the count.
  std::size_t (*select_below)(const double* v, std::size_t n, double threshold, std::uint32_t* idx);
};

const KernelTable& scalar_kernels();
/// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// Best table for this CPU. TAUFORGE_ISA=scalar in the environment forces the
/// reference kernels.
const KernelTable& kernels();

}  // namespace tauforge::simd
