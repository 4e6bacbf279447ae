#include "tauforge/simd/kernels.hpp"

#if defined(TAUFORGE_HAVE_AVX2)

#include <immintrin.h>

#include <limits>

namespace tauforge::simd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double hmin(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  double m = lanes[0];
  for (int i = 1; i < 4; ++i) m = lanes[i] < m ? lanes[i] : m;
  return m;
}

double min_plus_avx2(const double* a, const double* b, std::size_t n) {
  __m256d best0 = _mm256_set1_pd(kInf);
  __m256d best1 = best0;
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    best0 = _mm256_min_pd(best0, _mm256_add_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j)));
    best1 = _mm256_min_pd(best1,
                          _mm256_add_pd(_mm256_loadu_pd(a + j + 4), _mm256_loadu_pd(b + j + 4)));
  }
  for (; j + 4 <= n; j += 4) {
    best0 = _mm256_min_pd(best0, _mm256_add_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j)));
  }
  double best = hmin(_mm256_min_pd(best0, best1));
  for (; j < n; ++j) {
    const double v = a[j] + b[j];
    if (v < best) best = v;
  }
  return best;
}

ArgMax max_affine_avx2(const double* y, const double* f, double s, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  const __m256d four = _mm256_set1_pd(4.0);
  __m256d best = _mm256_set1_pd(-kInf);
  __m256d best_idx = _mm256_set1_pd(static_cast<double>(n));
  __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d v = _mm256_sub_pd(_mm256_mul_pd(vs, _mm256_loadu_pd(y + j)),
                                    _mm256_loadu_pd(f + j));
    const __m256d gt = _mm256_cmp_pd(v, best, _CMP_GT_OQ);
    best = _mm256_blendv_pd(best, v, gt);
    best_idx = _mm256_blendv_pd(best_idx, idx, gt);
    idx = _mm256_add_pd(idx, four);
  }
  alignas(32) double vals[4];
  alignas(32) double ids[4];
  _mm256_store_pd(vals, best);
  _mm256_store_pd(ids, best_idx);
  ArgMax out{vals[0], static_cast<std::size_t>(ids[0])};
  for (int l = 1; l < 4; ++l) {
    const auto id = static_cast<std::size_t>(ids[l]);
    if (vals[l] > out.value || (vals[l] == out.value && id < out.index)) {
      out.value = vals[l];
      out.index = id;
    }
  }
  for (; j < n; ++j) {
    const double v = s * y[j] - f[j];
    if (v > out.value) {
      out.value = v;
      out.index = j;
    }
  }
  return out;
}

double blend_add_min_avx2(const double* lo, const double* hi, double theta, const double* f,
                          double* out, std::size_t n) {
  const __m256d vt = _mm256_set1_pd(theta);
  __m256d best = _mm256_set1_pd(kInf);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d l = _mm256_loadu_pd(lo + j);
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(hi + j), l);
    const __m256d v = _mm256_add_pd(_mm256_add_pd(l, _mm256_mul_pd(vt, d)), _mm256_loadu_pd(f + j));
    _mm256_storeu_pd(out + j, v);
    best = _mm256_min_pd(best, v);
  }
  double m = hmin(best);
  for (; j < n; ++j) {
    const double d = hi[j] - lo[j];
    const double v = (lo[j] + theta * d) + f[j];
    out[j] = v;
    if (v < m) m = v;
  }
  return m;
}

std::size_t select_below_avx2(const double* v, std::size_t n, double threshold,
                              std::uint32_t* idx) {
  const __m256d vt = _mm256_set1_pd(threshold);
  std::size_t count = 0;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(v + j), vt, _CMP_LE_OQ));
    while (mask != 0) {
      const int lane = __builtin_ctz(static_cast<unsigned>(mask));
      idx[count++] = static_cast<std::uint32_t>(j + static_cast<std::size_t>(lane));
      mask &= mask - 1;
    }
  }
  for (; j < n; ++j) {
    if (v[j] <= threshold) idx[count++] = static_cast<std::uint32_t>(j);
  }
  return count;
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{"avx2", min_plus_avx2, max_affine_avx2, blend_add_min_avx2,
                                 select_below_avx2};
  if (!__builtin_cpu_supports("avx2")) return nullptr;
  return &table;
}

}  // namespace tauforge::simd

#else

namespace tauforge::simd {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace tauforge::simd

#endif
