#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tauforge/acceptance.hpp"
#include "tauforge/errors.hpp"
#include "tauforge/grid_function.hpp"
#include "tauforge/infimum_convolution.hpp"

using namespace tauforge;

namespace {
const GridSpec kSmall{-5.0, 5.0, 257};

double sup_over(const GridFunction& a, const GridFunction& b) { return sup_distance(a, b); }
}  // namespace

TEST_CASE("infimum convolution of quadratics") {
  // a x^2 box b x^2 = ab/(a+b) x^2
  const GridFunction f = GridFunction::sample([](double x) { return x * x; }, kSmall);
  const GridFunction g = GridFunction::sample([](double x) { return 3.0 * x * x; }, kSmall);
  const GridFunction h = infconv(f, g);
  CHECK(h.lo() == -10.0);
  CHECK(h.hi() == 10.0);
  for (double x = -4.0; x <= 4.0; x += 0.5) {
    CHECK(std::abs(h(x) - 0.75 * x * x) <= 0.1);
  }
}

TEST_CASE("infimum convolution commutes exactly") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GridFunction f = random_convex_function(seed, kSmall);
    const GridFunction g = random_convex_function(seed + 100, kSmall);
    CHECK(infconv(f, g).values() == infconv(g, f).values());
  }
}

TEST_CASE("infimum convolution is associative") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GridFunction f = random_convex_function(seed, kSmall);
    const GridFunction g = random_convex_function(seed + 10, kSmall);
    const GridFunction h = random_convex_function(seed + 20, kSmall);
    CHECK(sup_over(infconv(infconv(f, g), h), infconv(f, infconv(g, h))) <= 1e-2);
  }
}

TEST_CASE("indicator of zero is neutral") {
  const GridFunction f = random_convex_function(3, kSmall);
  const GridFunction id = GridFunction::indicator_of_zero(kSmall);
  const GridFunction h = infconv(f, id);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(h(f.x(i)) == doctest::Approx(f[i]).epsilon(1e-12));
}

TEST_CASE("sandwich bound for a bounded perturbation") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.3, 0.7);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GridFunction f = random_convex_function(seed, kSmall);
    const GridFunction g = random_convex_function(seed + 50, kSmall);
    std::vector<double> hv(kSmall.n);
    for (double& v : hv) v = u(rng);
    const double inf_h = *std::min_element(hv.begin(), hv.end());
    const double sup_h = *std::max_element(hv.begin(), hv.end());
    std::vector<double> gh = g.values();
    for (std::size_t i = 0; i < gh.size(); ++i) gh[i] += hv[i];
    const GridFunction base = infconv(f, g);
    const GridFunction pert = infconv(f, GridFunction(kSmall, gh));
    for (std::size_t k = 0; k < base.size(); ++k) {
      CHECK(base[k] + inf_h <= pert[k] + 1e-12);
      CHECK(pert[k] <= base[k] + sup_h + 1e-12);
    }
  }
}

TEST_CASE("sup-norm perturbations move the convolution by at most their size") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double eps : {1e-3, 0.1}) {
    const GridFunction f = random_convex_function(9, kSmall);
    const GridFunction g = random_convex_function(10, kSmall);
    std::vector<double> fv = f.values();
    for (double& v : fv) v += eps * u(rng);
    CHECK(sup_over(infconv(g, f), infconv(g, GridFunction(kSmall, fv))) <= eps + 1e-12);
  }
}

TEST_CASE("self-convolution of a convex function is 2 f(x/2)") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const GridFunction f = random_convex_function(seed, {-10.0, 10.0, 4096});
    CHECK(sup_over(infconv(f, f), selfconv_convex(f)) <= 5e-3);
  }
}

TEST_CASE("halving inverts the self-convolution") {
  const GridFunction g = random_convex_function(4, {-10.0, 10.0, 2049});
  const GridFunction half = halving(g);
  CHECK(half.lo() == -5.0);
  CHECK(half.hi() == 5.0);
  CHECK(half(1.0) == doctest::Approx(0.5 * g(2.0)).epsilon(1e-12));
  const GridFunction back = infconv(half, half);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(back(g.x(i)) - g[i]));
  CHECK(worst <= 5e-3);
}

TEST_CASE("grids with different spacings go through interpolation") {
  const GridFunction f = GridFunction::sample([](double x) { return x * x; }, {-5.0, 5.0, 201});
  const GridFunction g = GridFunction::sample([](double x) { return x * x; }, {-5.0, 5.0, 101});
  const GridFunction h = infconv(f, g);
  CHECK(h.step() == doctest::Approx(g.step()));
  for (double x = -4.0; x <= 4.0; x += 1.0) CHECK(std::abs(h(x) - 0.5 * x * x) <= 0.01);
}

TEST_CASE("infinite entries never win a split") {
  std::vector<double> v(kSmall.n, kInf);
  for (std::size_t i = 100; i < 150; ++i) v[i] = 0.0;
  const GridFunction box(kSmall, v);
  const GridFunction f = GridFunction::sample([](double x) { return std::abs(x); }, kSmall);
  const GridFunction h = infconv(f, box);
  for (std::size_t k = 0; k < h.size(); ++k) CHECK(h[k] >= 0.0);
  for (std::size_t k = 0; k < h.size(); ++k) {
    // finite exactly where x - y can reach the box
    const bool reachable = h.x(k) >= f.lo() + box.x(100) - 1e-9 && h.x(k) <= f.hi() + box.x(149) + 1e-9;
    CHECK(std::isfinite(h[k]) == reachable);
  }
}
