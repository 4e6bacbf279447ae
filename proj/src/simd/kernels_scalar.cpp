#include <limits>

#include "tauforge/simd/kernels.hpp"

namespace tauforge::simd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double min_plus_scalar(const double* a, const double* b, std::size_t n) {
  double best = kInf;
  for (std::size_t j = 0; j < n; ++j) {
    const double v = a[j] + b[j];
    if (v < best) best = v;
  }
  return best;
}

ArgMax max_affine_scalar(const double* y, const double* f, double s, std::size_t n) {
  ArgMax out{-kInf, n};
  for (std::size_t j = 0; j < n; ++j) {
    const double v = s * y[j] - f[j];
    if (v > out.value) {
      out.value = v;
      out.index = j;
    }
  }
  return out;
}

double blend_add_min_scalar(const double* lo, const double* hi, double theta, const double* f,
                            double* out, std::size_t n) {
  double best = kInf;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = hi[j] - lo[j];
    const double v = (lo[j] + theta * d) + f[j];
    out[j] = v;
    if (v < best) best = v;
  }
  return best;
}

std::size_t select_below_scalar(const double* v, std::size_t n, double threshold,
                                std::uint32_t* idx) {
  std::size_t count = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (v[j] <= threshold) idx[count++] = static_cast<std::uint32_t>(j);
  }
  return count;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", min_plus_scalar, max_affine_scalar,
                                 blend_add_min_scalar, select_below_scalar};
  return table;
}

}  // namespace tauforge::simd
