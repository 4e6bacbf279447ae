#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "tauforge/convex_transforms.hpp"
#include "tauforge/errors.hpp"
#include "tauforge/measures.hpp"

using namespace tauforge;

namespace {
const std::vector<std::string> kNames = {"gaussian",          "exp+",
                                         "exp-sym",           "logconcave:abs",
                                         "logconcave:square", "logconcave:uniform",
                                         "logconcave:power:3"};
}

TEST_CASE("every named measure has unit mass") {
  for (const auto& name : kNames) {
    CAPTURE(name);
    const Measure1D mu = measure_from_name(name);
    CHECK(std::abs(mu.total_mass() - 1.0) <= 1e-9);
  }
}

TEST_CASE("log-concave measures are isotropic and symmetric") {
  for (const auto& name : kNames) {
    if (name.rfind("logconcave:", 0) != 0) continue;
    CAPTURE(name);
    const Measure1D mu = measure_from_name(name);
    CHECK(mu.symmetric());
    CHECK(mu.second_moment() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(mu.expect([](double x) { return x; })) < 1e-9);
  }
}

TEST_CASE("second moments of the reference laws") {
  CHECK(measure_from_name("gaussian").second_moment() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(measure_from_name("exp-sym").second_moment() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(measure_from_name("exp+").second_moment() == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("quantile inverts the cdf on the central mass") {
  for (const auto& name : kNames) {
    CAPTURE(name);
    const Measure1D mu = measure_from_name(name);
    const double a = mu.quantile(5e-5);
    const double b = mu.quantile(1.0 - 5e-5);
    for (int k = 0; k <= 200; ++k) {
      const double x = a + (b - a) * k / 200.0;
      CHECK(std::abs(mu.quantile(mu.cdf(x)) - x) <= 1e-8);
    }
  }
}

TEST_CASE("cdf, sf and their logs agree") {
  for (const auto& name : kNames) {
    CAPTURE(name);
    const Measure1D mu = measure_from_name(name);
    for (double p : {0.01, 0.2, 0.5, 0.8, 0.99}) {
      const double x = mu.quantile(p);
      CHECK(mu.cdf(x) + mu.sf(x) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::exp(mu.log_cdf(x)) == doctest::Approx(mu.cdf(x)).epsilon(1e-12));
      CHECK(std::exp(mu.log_sf(x)) == doctest::Approx(mu.sf(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("closed-form Cramer transform of the symmetric exponential matches quadrature") {
  const Measure1D nu = make_symmetric_exponential();
  for (double x = -20.0; x <= 20.0; x += 0.5) {
    CAPTURE(x);
    CHECK(std::abs(exp_sym_cramer(x) - cramer_numeric(nu, x)) <= 1e-7);
  }
}

TEST_CASE("derivative of the symmetric exponential Cramer transform") {
  const double step = 1e-5;
  for (double x = -30.0; x <= 30.0; x += 0.37) {
    CAPTURE(x);
    const double fd = (exp_sym_cramer(x + step) - exp_sym_cramer(x - step)) / (2.0 * step);
    CHECK(std::abs(exp_sym_cramer_derivative(x) - fd) <= 1e-8);
    CHECK(exp_sym_cramer_derivative(x) ==
          doctest::Approx(x / (std::sqrt(x * x + 1.0) + 1.0)).epsilon(1e-14));
  }
}

TEST_CASE("small-argument form of the symmetric exponential transform avoids cancellation") {
  for (double x : {1e-8, 1e-5, 1e-3}) {
    // leading terms x^2/4 - x^4/32
    CHECK(exp_sym_cramer(x) == doctest::Approx(x * x / 4.0 - x * x * x * x / 32.0).epsilon(1e-9));
  }
  CHECK(exp_sym_cramer(0.0) == 0.0);
}

TEST_CASE("Cramer transforms of symmetric measures are even") {
  for (const char* name : {"gaussian", "exp-sym", "logconcave:square", "logconcave:power:3"}) {
    CAPTURE(name);
    const Measure1D mu = measure_from_name(name);
    for (double x : {0.7, 2.9}) {
      CHECK(cramer_numeric(mu, x) == doctest::Approx(cramer_numeric(mu, -x)).epsilon(1e-9));
    }
  }
}

TEST_CASE("log-Laplace transforms") {
  const Measure1D g = make_gaussian(0.0, 1.0);
  CHECK(log_mgf_numeric(g, 1.5) == doctest::Approx(1.125).epsilon(1e-10));
  const Measure1D nu = make_symmetric_exponential();
  CHECK(log_mgf_numeric(nu, 0.5) == doctest::Approx(-std::log(0.75)).epsilon(1e-10));
  CHECK(std::isinf(log_mgf_numeric(nu, 1.5)));
  const Measure1D plus = make_exponential_one_sided();
  CHECK(log_mgf(plus, -2.0) == doctest::Approx(-std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("symmetrization of the one-sided exponential is the symmetric exponential") {
  const SymmetrizedMeasure s = symmetrize(make_exponential_one_sided());
  const Measure1D nu = make_symmetric_exponential();
  for (double t : {-0.9, -0.3, 0.0, 0.4, 0.8}) {
    CHECK(s.log_mgf(t) == doctest::Approx(log_mgf(nu, t)).epsilon(1e-9));
  }
  REQUIRE(s.closed_form_cramer().has_value());
  CHECK((*s.closed_form_cramer())(1.7) == doctest::Approx(exp_sym_cramer(1.7)).epsilon(1e-12));
}

TEST_CASE("one-sided exponential: the rate at the origin is infinite") {
  const Measure1D plus = make_exponential_one_sided();
  REQUIRE(plus.closed_form_cramer().has_value());
  CHECK(std::isinf((*plus.closed_form_cramer())(0.0)));
  CHECK((*plus.closed_form_cramer())(1.0) == doctest::Approx(0.0));
  CHECK((*plus.closed_form_cramer())(2.0) == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("invalid measure requests are rejected") {
  CHECK_THROWS_AS(measure_from_name("cauchy"), InvalidParameter);
  CHECK_THROWS_AS(measure_from_name("logconcave:power:-1"), InvalidParameter);
  CHECK_THROWS_AS(make_gaussian(0.0, -1.0), InvalidParameter);
  CHECK_THROWS_AS(make_gaussian(0.0, 1.0).quantile(1.0), InvalidParameter);
}

TEST_CASE("densities at the origin of isotropic log-concave laws") {
  CHECK(measure_from_name("logconcave:abs").density(0.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
  CHECK(measure_from_name("logconcave:uniform").density(0.0) ==
        doctest::Approx(1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-9));
  CHECK(measure_from_name("logconcave:square").density(0.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * 3.14159265358979323846)).epsilon(1e-9));
}
