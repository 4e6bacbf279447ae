#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tauforge/cost.hpp"
#include "tauforge/errors.hpp"
#include "tauforge/measures.hpp"
#include "tauforge/tau.hpp"

using namespace tauforge;

namespace {

const GridSpec kGrid{-20.0, 20.0, 1024};

// brute-force inf over a dense y grid plus the nodes, f continued flat
double brute_infconv(const CostFunction& w, const GridFunction& f, double x) {
  double best = kInf;
  const double lo = f.lo() - 60.0;
  const double hi = f.hi() + 60.0;
  const int n = 200000;  // spacing 7e-4
  for (int k = 0; k <= n; ++k) {
    const double y = lo + (hi - lo) * k / n;
    best = std::min(best, w(x - y) + f.extended(y));
  }
  for (std::size_t i = 0; i < f.size(); ++i) best = std::min(best, w(x - f.x(i)) + f[i]);
  return best;
}

GridFunction random_bounded(std::uint64_t seed, const GridSpec& g) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(g.n);
  double level = 0.0;
  for (double& x : v) {
    level = std::clamp(level + 0.2 * u(rng), -3.0, 3.0);
    x = level;
  }
  return GridFunction(g, v);
}

}  // namespace

TEST_CASE("pointwise infimum convolution agrees with brute force") {
  const GridSpec g{-10.0, 10.0, 201};
  for (const char* spec : {"ic:exp-sym:1", "ic:gaussian:1", "quadratic:0.5", "linear:1"}) {
    const CostFunction w = cost_from_spec(spec);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const GridFunction f = random_bounded(seed, g);
      const InfConvEvaluator ev(w, f);
      for (double x = -25.0; x <= 25.0; x += 1.37) {
        CAPTURE(spec);
        CAPTURE(x);
        const double exact = ev(x);
        const double brute = brute_infconv(w, f, x);
        CHECK(exact <= brute + 1e-12);
        CHECK(brute - exact <= 5e-3);
      }
    }
  }
}

TEST_CASE("infimum convolution with the zero function is zero") {
  const CostFunction w = ic_cost(make_gaussian(0.0, 1.0), 1.0);
  const GridFunction zero(kGrid, std::vector<double>(kGrid.n, 0.0));
  const InfConvEvaluator ev(w, zero);
  for (double x : {-30.0, -1.0, 0.0, 2.5, 40.0}) CHECK(std::abs(ev(x)) <= 1e-15);
}

TEST_CASE("tau functional is invariant under constant shifts") {
  const Measure1D mu = make_symmetric_exponential();
  const CostFunction w = ic_cost(mu, 2.0);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const GridFunction f = random_bounded(seed, kGrid);
    std::vector<double> shifted = f.values();
    for (double& v : shifted) v += 1.75;
    const TauReport a = tau_functional(mu, w, f);
    const TauReport b = tau_functional(mu, w, GridFunction(kGrid, shifted));
    CHECK(std::abs(a.product - b.product) <= 1e-9);
    CHECK(a.product == doctest::Approx(a.integral_left * a.integral_right).epsilon(1e-12));
  }
}

TEST_CASE("tau functional of the zero function is one") {
  const Measure1D mu = make_gaussian(0.0, 1.0);
  const GridFunction zero(kGrid, std::vector<double>(kGrid.n, 0.0));
  const TauReport r = tau_functional(mu, ic_cost(mu, 1.0), zero);
  CHECK(r.product == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.verdict == Verdict::pass);
}

TEST_CASE("cost functions vanish at 0 and are nonnegative") {
  for (const char* spec : {"ic:gaussian:1", "ic:exp-sym:2", "ic:exp+:2", "ic:logconcave:abs:1",
                           "maurey", "linear:0.3", "quadratic:2", "zero"}) {
    CAPTURE(spec);
    const CostFunction w = cost_from_spec(spec);
    CHECK(w(0.0) == doctest::Approx(0.0).epsilon(1e-12));
    for (double x = -30.0; x <= 30.0; x += 0.9) CHECK(w(x) >= -1e-12);
  }
}

TEST_CASE("ic cost decreases as beta grows") {
  for (const char* name : {"gaussian", "exp-sym", "exp+", "logconcave:uniform"}) {
    CAPTURE(name);
    const Measure1D mu = measure_from_name(name);
    const CostFunction w1 = ic_cost(mu, 1.0);
    const CostFunction w2 = ic_cost(mu, 2.0);
    const CostFunction w3 = ic_cost(mu, 3.5);
    for (double x = -6.0; x <= 6.0; x += 0.25) {
      CHECK(w2(x) <= w1(x) + 1e-10);
      CHECK(w3(x) <= w2(x) + 1e-10);
    }
  }
}

TEST_CASE("Maurey's cost") {
  CHECK(maurey_cost_U(3.0) == doctest::Approx(0.25));
  CHECK(maurey_cost_U(4.0) == doctest::Approx(16.0 / 36.0));
  CHECK(maurey_cost_U(-6.0) == doctest::Approx(8.0 / 9.0));
  CHECK(maurey_cost().slope(5.0) == doctest::Approx(2.0 / 9.0));
}

TEST_CASE("default family: 200 distinct bounded members") {
  const CostFunction w = ic_cost(make_gaussian(0.0, 1.0), 1.0);
  const auto fam = default_family(w, {kGrid, 99});
  CHECK(fam.size() == 200);
  std::set<std::string> labels;
  for (const auto& m : fam) {
    labels.insert(m.label);
    CHECK(m.f.all_finite());
  }
  CHECK(labels.size() == fam.size());
  const auto again = default_family(w, {kGrid, 99});
  for (std::size_t i = 0; i < fam.size(); ++i) CHECK(fam[i].f.values() == again[i].f.values());
}

TEST_CASE("reference pairs satisfy the infimum-convolution inequality") {
  const FamilySpec spec{kGrid, 20240613};
  SUBCASE("Gaussian with beta = 1") {
    const SuiteResult s = ic_suite(make_gaussian(0.0, 1.0), 1.0, spec);
    CHECK(s.all_pass());
    CHECK(s.max_product <= 1.0 + 1e-6);
  }
  SUBCASE("symmetric exponential with beta = 2") {
    CHECK(ic_suite(make_symmetric_exponential(), 2.0, spec).all_pass());
  }
  SUBCASE("one-sided exponential with beta = 2") {
    CHECK(ic_suite(make_exponential_one_sided(), 2.0, spec).all_pass());
  }
}

TEST_CASE("one-sided exponential with beta = 1 violates the inequality") {
  const SuiteResult s = ic_suite(make_exponential_one_sided(), 1.0, FamilySpec{kGrid, 20240613});
  CHECK(s.failed > 0);
  CHECK(s.max_product > 1.2);
}

TEST_CASE("verdict bands") {
  const Measure1D mu = make_exponential_one_sided();
  const CostFunction w = ic_cost(mu, 1.0);
  const auto fam = default_family(w, {kGrid, 1});
  TauOptions strict;
  for (const auto& m : fam) {
    const TauReport r = tau_functional(mu, w, m.f, strict);
    if (r.product <= 1.0 + strict.pass_slack) {
      CHECK(r.verdict == Verdict::pass);
    } else if (r.product > 1.0 + strict.fail_margin) {
      CHECK(r.verdict == Verdict::fail);
    } else {
      CHECK(r.verdict == Verdict::inconclusive);
    }
    CHECK(r.pass == (r.verdict == Verdict::pass));
  }
  CHECK(std::string(to_string(Verdict::inconclusive)) == "inconclusive");
}

TEST_CASE("half-line counterexample integrals") {
  const CounterexampleIntegrals c = counterexample_integrals();
  CHECK(c.i1 == doctest::Approx(0.8221190595).epsilon(1e-9));
  CHECK(c.i2 == doctest::Approx(0.7872717101).epsilon(1e-9));
  CHECK(c.i3 == doctest::Approx(0.2979500905).epsilon(1e-9));
  CHECK(c.i4 == doctest::Approx(0.4267985129).epsilon(1e-9));
  CHECK(c.p1 == doctest::Approx(2.0 * c.i1 * c.i2).epsilon(1e-14));
  CHECK(c.p2 == doctest::Approx(8.0 * c.i3 * c.i4).epsilon(1e-14));
  CHECK(c.p1 > 1.0);
  CHECK(c.p2 > 1.0);
}

TEST_CASE("test of W against itself for the Gaussian") {
  const Lemma52Result r = lemma52_integrals(make_gaussian(0.0, 1.0));
  // the cost is x^2/4, so e^{x^2/8} and e^{-x^2/4} against the standard normal
  CHECK(r.left == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-10));
  CHECK(r.right == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-10));
  CHECK(r.value == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-10));
}

TEST_CASE("sufficient conditions on a cost") {
  const Lemma51Report ok = lemma51_conditions(maurey_cost(), 200.0, 10001);
  CHECK(ok.pass());
  const Lemma51Report nu_half = lemma51_conditions(
      CostFunction{"nu(x/2)", [](double x) { return exp_sym_cramer(0.5 * x); },
                   [](double x) { return 0.5 * exp_sym_cramer_derivative(0.5 * x); }},
      200.0, 10001);
  CHECK(nu_half.pass());
  const Lemma51Report bad = lemma51_conditions(quadratic_cost(1.0), 10.0, 1001);
  CHECK_FALSE(bad.slope_ok);
  CHECK_FALSE(bad.pass());
  CHECK_THROWS_AS(lemma51_conditions(maurey_cost(), -1.0, 10), InvalidParameter);
}

TEST_CASE("families read from files") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "tauforge_family_test";
  fs::create_directories(dir);
  {
    std::ofstream a(dir / "a.csv");
    a << "x,value\n-1,0\n0,1\n1,0\n";
    std::ofstream b(dir / "b.csv");
    b << "x,value\n-2,0.5\n0,0.5\n2,0.5\n";
    std::ofstream list(dir / "family.txt");
    list << "# two members\na.csv\nb.csv\n";
  }
  const auto fam = family_from_file((dir / "family.txt").string());
  REQUIRE(fam.size() == 2);
  CHECK(fam[0].label == "a.csv");
  CHECK(fam[1].f.size() == 3);
  CHECK(family_from_file((dir / "a.csv").string()).size() == 1);
  CHECK_THROWS_AS(family_from_file((dir / "missing.txt").string()), InvalidInput);
  fs::remove_all(dir);
}

TEST_CASE("unbounded test functions are rejected") {
  std::vector<double> v(kGrid.n, 0.0);
  v[3] = kInf;
  const Measure1D mu = make_gaussian(0.0, 1.0);
  CHECK_THROWS_AS(tau_functional(mu, ic_cost(mu, 1.0), GridFunction(kGrid, v)), InvalidInput);
  CHECK_THROWS_AS(ic_cost(mu, 0.0), InvalidParameter);
  CHECK_THROWS_AS(ic_suite(mu, 1.0, std::vector<FamilyMember>{}), InvalidParameter);
}
