#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "tauforge/errors.hpp"
#include "tauforge/simd/kernels.hpp"

using namespace tauforge;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double inf_rate) {
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = coin(rng) < inf_rate ? kInf : u(rng);
  return v;
}

const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 100, 1023, 1025};

}  // namespace

TEST_CASE("dispatcher returns a usable table") {
  const simd::KernelTable& k = simd::kernels();
  CHECK(k.name != nullptr);
  CHECK(k.min_plus != nullptr);
  CHECK(std::string(simd::scalar_kernels().name) == "scalar");
}

TEST_CASE("scalar kernels on hand-checked inputs") {
  const simd::KernelTable& s = simd::scalar_kernels();
  const double a[] = {1.0, 5.0, kInf};
  const double b[] = {3.0, -2.0, -100.0};
  CHECK(s.min_plus(a, b, 3) == 3.0);
  CHECK(std::isinf(s.min_plus(a, b, 0)));
  const double y[] = {-1.0, 0.0, 1.0};
  const double f[] = {1.0, 0.0, 1.0};
  const simd::ArgMax m = s.max_affine(y, f, 0.0, 3);
  CHECK(m.index == 1);
  CHECK(m.value == 0.0);
  const double g[] = {0.0, 0.0, 0.0};
  CHECK(s.max_affine(y, g, 0.0, 3).index == 0);  // tie goes to the first index
  const double infs[] = {kInf, kInf};
  CHECK(s.max_affine(y, infs, 1.0, 2).index == 2);
  double out[3];
  const double lo[] = {0.0, 1.0, 2.0};
  const double hi[] = {2.0, 3.0, 4.0};
  CHECK(s.blend_add_min(lo, hi, 0.5, f, out, 3) == 2.0);
  CHECK(out[2] == 4.0);
  std::uint32_t idx[3];
  CHECK(s.select_below(f, 3, 0.5, idx) == 1);
  CHECK(idx[0] == 1);
}

TEST_CASE("AVX2 kernels reproduce the scalar reference bit for bit") {
  const simd::KernelTable* v = simd::avx2_kernels();
  if (v == nullptr) {
    MESSAGE("AVX2 unavailable on this machine; equivalence not exercised");
    return;
  }
  const simd::KernelTable& s = simd::scalar_kernels();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int rep = 0; rep < 20; ++rep) {
    for (std::size_t n : kLengths) {
      for (double inf_rate : {0.0, 0.3, 1.0}) {
        CAPTURE(n);
        CAPTURE(inf_rate);
        const auto a = random_vector(rng, n, inf_rate);
        const auto b = random_vector(rng, n, 0.0);
        const auto lo = random_vector(rng, n, 0.0);
        const auto hi = random_vector(rng, n, 0.0);

        const double ms = s.min_plus(a.data(), b.data(), n);
        const double mv = v->min_plus(a.data(), b.data(), n);
        CHECK(((ms == mv) || (std::isinf(ms) && std::isinf(mv))));

        const double slope = u(rng);
        const simd::ArgMax xs = s.max_affine(b.data(), a.data(), slope, n);
        const simd::ArgMax xv = v->max_affine(b.data(), a.data(), slope, n);
        CHECK(xs.index == xv.index);
        if (xs.index < n) CHECK(xs.value == xv.value);

        const double theta = 0.5 * (u(rng) + 3.0) / 3.0;
        std::vector<double> os(n), ov(n);
        const double bs = s.blend_add_min(lo.data(), hi.data(), theta, a.data(), os.data(), n);
        const double bv = v->blend_add_min(lo.data(), hi.data(), theta, a.data(), ov.data(), n);
        CHECK(((bs == bv) || (std::isinf(bs) && std::isinf(bv))));
        CHECK(os == ov);

        const double thr = u(rng) * 30.0;
        std::vector<std::uint32_t> is(n + 1), iv(n + 1);
        const std::size_t cs = s.select_below(a.data(), n, thr, is.data());
        const std::size_t cv = v->select_below(a.data(), n, thr, iv.data());
        REQUIRE(cs == cv);
        for (std::size_t k = 0; k < cs; ++k) CHECK(is[k] == iv[k]);
      }
    }
  }
}

TEST_CASE("AVX2 argmax ties resolve to the smallest index") {
  const simd::KernelTable* v = simd::avx2_kernels();
  if (v == nullptr) return;
  for (std::size_t n : kLengths) {
    if (n == 0) continue;
    std::vector<double> y(n, 1.0), f(n, 0.0);
    CHECK(v->max_affine(y.data(), f.data(), 2.0, n).index == 0);
    f[n - 1] = -1.0;
    CHECK(v->max_affine(y.data(), f.data(), 2.0, n).index == n - 1);
  }
}

TEST_CASE("environment override forces the scalar table") {
  // the dispatcher reads the variable once, so only the scalar table's identity is checked here
  if (const char* isa = std::getenv("TAUFORGE_ISA"); isa && std::string(isa) == "scalar") {
    CHECK(&simd::kernels() == &simd::scalar_kernels());
  } else if (simd::avx2_kernels() != nullptr) {
    CHECK(&simd::kernels() == simd::avx2_kernels());
  }
}
