#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "tauforge/errors.hpp"
#include "tauforge/measures.hpp"
#include "tauforge/transport.hpp"

using namespace tauforge;

TEST_CASE("theta solves the contact equation") {
  CHECK(solve_theta() == doctest::Approx(1.898985344924).epsilon(1e-11));
  CHECK(solve_theta() > std::numbers::sqrt2);
}

TEST_CASE("delta and the constant C") {
  const DeltaSolution d = solve_delta(std::numbers::sqrt3);
  CHECK(d.delta == doctest::Approx(2.776854645291).epsilon(1e-11));
  CHECK(d.C == doctest::Approx(9.619306661757).epsilon(1e-11));
  CHECK(std::abs(d.residual) <= 1e-12);
  CHECK(exp_sym_cramer(d.delta) == doctest::Approx(std::log(2.0) + 1.0 / d.c).epsilon(1e-12));
}

TEST_CASE("delta decreases as c grows") {
  double prev = kInf;
  for (double c : {1.0, std::numbers::sqrt3, 2.0, 3.0}) {
    const double delta = solve_delta(c).delta;
    CHECK(delta < prev);
    prev = delta;
  }
  CHECK_THROWS_AS(solve_delta(0.0), InvalidParameter);
  CHECK_THROWS_AS(solve_delta(-2.0), InvalidParameter);
}

TEST_CASE("conjugate of ln cosh") {
  CHECK(lncosh_conjugate(0.0) == 0.0);
  CHECK(lncosh_conjugate(1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(lncosh_conjugate(-1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  for (double x : {0.1, 0.5, 0.9}) {
    // sup_t xt - ln cosh t is attained at t = atanh x
    const double t = std::atanh(x);
    CHECK(lncosh_conjugate(x) == doctest::Approx(x * t - std::log(std::cosh(t))).epsilon(1e-13));
  }
  CHECK_THROWS_AS(lncosh_conjugate(1.5), DomainError);
}

TEST_CASE("the theta comparison gap is nonnegative on [0, 1]") {
  const Lemma84Scan s = lemma84_scan(10001);
  CHECK(s.pass);
  CHECK(s.min_gap >= -1e-10);
  CHECK(std::abs(s.h0) <= 1e-10);
  CHECK(std::abs(s.h1) <= 1e-10);
  CHECK(s.increasing_before_x0);
  CHECK(s.x0 == doctest::Approx(0.427502).epsilon(1e-5));
  // theta is the smallest multiplier that works
  double dip = kInf;
  for (int k = 0; k <= 1000; ++k) dip = std::min(dip, lemma84_gap(k / 1000.0, 0.99 * s.theta));
  CHECK(dip < 0.0);
}

TEST_CASE("Gaussian transport map") {
  const TransportMap T = build_transport(make_gaussian(0.0, 1.0));
  const Measure1D nu = make_symmetric_exponential();
  const Measure1D g = make_gaussian(0.0, 1.0);
  CHECK(T.derivative_at_zero() == doctest::Approx(std::sqrt(2.0 * std::numbers::pi) / 2.0).epsilon(1e-12));
  CHECK(T(0.0) == 0.0);
  double prev = -kInf;
  for (double x = -40.0; x <= 40.0; x += 0.5) {
    CAPTURE(x);
    const double y = T(x);
    CHECK(y > prev);
    prev = y;
    CHECK(T(-x) == doctest::Approx(-y).epsilon(1e-14));
    CHECK(std::abs(g.cdf(y) - nu.cdf(x)) <= 1e-12);
    CHECK(T.inverse(y) == doctest::Approx(x).epsilon(1e-10));
  }
  for (double a = 0.0; a <= 30.0; a += 1.5) {
    const double b = a + 2.0;
    CHECK(0.5 * (T(a) + T(b)) <= T(0.5 * (a + b)) + 1e-12);
  }
}

TEST_CASE("midpoint bound for the transport map") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (const char* target : {"gaussian", "logconcave:abs", "logconcave:uniform", "logconcave:power:3"}) {
    CAPTURE(target);
    const TransportMap T = build_transport(measure_from_name(target));
    for (int k = 0; k < 500; ++k) {
      const double x = u(rng);
      const double y = u(rng);
      CHECK(std::abs(T(x) - T(y)) <= 2.0 * T(0.5 * std::abs(x - y)) + 1e-12);
    }
  }
}

TEST_CASE("modulus of continuity undoes the doubling") {
  const TransportMap T = build_transport(make_gaussian(0.0, 1.0));
  for (double x = 0.0; x <= 50.0; x += 0.5) {
    CAPTURE(x);
    CHECK(std::abs(modulus_omega(T, 2.0 * T(x)) - 2.0 * x) <= 1e-6);
  }
  CHECK_THROWS_AS(modulus_omega(T, -1.0), InvalidParameter);
}

TEST_CASE("transport to the isotropic symmetric exponential is linear") {
  const TransportMap T = build_transport(measure_from_name("logconcave:abs"));
  for (double x : {0.3, 1.0, 7.5, 30.0}) CHECK(T(x) == doctest::Approx(x / std::sqrt(2.0)).epsilon(1e-9));
  CHECK(T.derivative_at_zero() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("transport to a bounded law saturates at the support edge") {
  const TransportMap T = build_transport(measure_from_name("logconcave:uniform"));
  CHECK(T.sup() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
  CHECK(T(100.0) <= T.sup());
  CHECK(T.derivative_at_zero() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
}

TEST_CASE("density at 0 of isotropic log-concave laws is at least 1/(2 sqrt 3)") {
  for (const char* name : {"gaussian", "logconcave:abs", "logconcave:square", "logconcave:uniform",
                           "logconcave:power:3", "logconcave:power:1.5"}) {
    CAPTURE(name);
    const Measure1D mu = measure_from_name(name);
    const HensleyResult h = hensley_check(mu);
    CHECK(h.ok);
    CHECK(h.g0 >= h.bound - 1e-12);
    CHECK(build_transport(mu).derivative_at_zero() <= std::numbers::sqrt3 + 1e-9);
  }
  CHECK(hensley_check(measure_from_name("logconcave:uniform")).g0 ==
        doctest::Approx(1.0 / (2.0 * std::numbers::sqrt3)).epsilon(1e-12));
}

TEST_CASE("Cramer transform dominates the tail exponent") {
  const Measure1D g = make_gaussian(0.0, 1.0);
  for (double x : {0.0, 0.5, 2.0, 6.0}) CHECK(lemma83_check(g, x).ok);
  CHECK_THROWS_AS(lemma83_check(make_exponential_one_sided(), 1.0), InvalidParameter);
}

TEST_CASE("invalid transport targets are rejected") {
  CHECK_THROWS_AS(build_transport(make_exponential_one_sided()), InvalidParameter);
  CHECK_THROWS_AS(build_transport(make_symmetric_exponential()), InvalidParameter);
  CHECK_THROWS_AS(build_transport(make_gaussian(0.0, 4.0)), InvalidParameter);
}

TEST_CASE("cost domination through the transport map") {
  const DominationReport d = transport_ic_cost_domination(make_gaussian(0.0, 1.0), std::numbers::sqrt3);
  CHECK(d.pass);
  CHECK(d.beta == doctest::Approx(9.619306661757).epsilon(1e-11));
  CHECK(d.worst_margin >= -1e-8);
  CHECK(d.worst_actual_margin >= -1e-8);
  // c must be at least T'(0)
  CHECK_THROWS_AS(transport_ic_cost_domination(make_gaussian(0.0, 1.0), 1.0), InvalidParameter);
}

TEST_CASE("full Gaussian diagnostics") {
  const TransportDiagnostics d = transport_diagnostics(make_gaussian(0.0, 1.0));
  CHECK(d.pass);
  CHECK(d.oddness <= 1e-12);
  CHECK(d.monotone_violation == 0.0);
  CHECK(d.concavity_violation <= 1e-12);
  CHECK(d.omega_error <= 1e-6);
  CHECK(d.omega_checked_to == 50.0);
}
