#include "tauforge/transport.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <utility>

#include "tauforge/convex_transforms.hpp"
#include "tauforge/quadrature.hpp"

namespace tauforge {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Largest y in [0, edge) with g(y) >= target, for g nonincreasing.
template <class G>
double solve_decreasing(G&& g, double target, double edge) {
  double a = 0.0;
  double b = 1.0;
  if (std::isfinite(edge)) {
    b = edge;
  } else {
    while (g(b) >= target) {
      a = b;
      b *= 2.0;
      if (b > 1e300) return kInf;
    }
  }
  for (int it = 0; it < 2200; ++it) {
    const double m = 0.5 * (a + b);
    if (!(m > a && m < b)) break;
    (g(m) >= target ? a : b) = m;
  }
  return 0.5 * (a + b);
}

double nu_cdf(double x) { return x < 0.0 ? 0.5 * std::exp(x) : 1.0 - 0.5 * std::exp(-x); }

}  // namespace

TransportMap::TransportMap(Measure1D target) : target_(std::move(target)) {
  if (!target_.symmetric()) {
    throw InvalidParameter("transport target '" + target_.name() + "' is not symmetric");
  }
  if (std::abs(target_.second_moment() - 1.0) > 1e-6) {
    throw InvalidParameter("transport target '" + target_.name() +
                           "' is not isotropic (second moment " +
                           std::to_string(target_.second_moment()) + ")");
  }
  const double g0 = target_.density(0.0);
  if (!(g0 > 0.0) || !std::isfinite(g0)) {
    throw InvalidParameter("transport target '" + target_.name() +
                           "' has density 0 at the origin; T'(0) would be infinite");
  }
  slope0_ = 1.0 / (2.0 * g0);
}

double TransportMap::operator()(double x) const {
  if (x == 0.0) return 0.0;
  if (std::isnan(x)) return x;
  if (x > 0.0) {
    return solve_decreasing([this](double y) { return target_.log_sf(y); }, -kLn2 - x,
                            target_.support().hi);
  }
  return -solve_decreasing([this](double y) { return target_.log_cdf(-y); }, -kLn2 + x,
                           -target_.support().lo);
}

double TransportMap::inverse(double y) const {
  if (y >= sup()) return kInf;
  if (y <= target_.support().lo) return -kInf;
  if (y == 0.0) return 0.0;
  const double sign = y > 0.0 ? 1.0 : -1.0;
  const double ay = std::abs(y);
  double a = 0.0;
  double b = 1.0;
  while (sign * (*this)(sign * b) < ay) {
    a = b;
    b *= 2.0;
  }
  while (b - a > 1e-12) {
    const double m = 0.5 * (a + b);
    if (!(m > a && m < b)) break;
    (sign * (*this)(sign * m) < ay ? a : b) = m;
  }
  return sign * 0.5 * (a + b);
}

TransportMap build_transport(const Measure1D& target) { return TransportMap(target); }

double modulus_omega(const TransportMap& T, double h) {
  if (!(h >= 0.0)) throw InvalidParameter("modulus_omega: h must be nonnegative");
  if (h == 0.0) return 0.0;
  if (0.5 * h >= T.sup()) return kInf;
  return 2.0 * T.inverse(0.5 * h);
}

double solve_theta() {
  return quad::bisect([](double t) { return exp_sym_cramer(t) - kLn2; }, std::numbers::sqrt2,
                      10.0, 1e-15);
}

DeltaSolution solve_delta(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidParameter("solve_delta: c must be positive");
  const double level = kLn2 + 1.0 / c;
  if (exp_sym_cramer(100.0) < level) {
    throw InvalidParameter("solve_delta: no root in (0, 100] for c = " + std::to_string(c));
  }
  DeltaSolution s{};
  s.c = c;
  s.delta = quad::bisect([level](double d) { return exp_sym_cramer(d) - level; }, 0.0, 100.0,
                         1e-15);
  s.C = 2.0 * c * s.delta;
  s.residual = exp_sym_cramer(s.delta) - level;
  return s;
}

double lncosh_conjugate(double x) {
  if (std::isnan(x) || std::abs(x) > 1.0) {
    throw DomainError("(ln cosh)* is finite only on [-1, 1]");
  }
  const double ax = std::abs(x);
  if (ax == 1.0) return kLn2;
  return 0.5 * ((1.0 + ax) * std::log1p(ax) + (1.0 - ax) * std::log1p(-ax));
}

double lemma84_gap(double x, double theta) {
  return exp_sym_cramer(theta * x) - lncosh_conjugate(x);
}

double lemma84_inflection(double theta) {
  const double t2 = theta * theta;
  return std::sqrt((4.0 * t2 - 3.0 - std::sqrt(8.0 * t2 + 9.0)) / (8.0 * t2));
}

Lemma84Scan lemma84_scan(std::size_t n) {
  if (n < 2) throw InvalidParameter("lemma84_scan: need at least 2 points");
  Lemma84Scan s;
  s.theta = solve_theta();
  s.n = n;
  s.x0 = lemma84_inflection(s.theta);
  s.min_gap = kInf;
  s.increasing_before_x0 = true;
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n - 1);
    const double h = lemma84_gap(x, s.theta);
    if (h < s.min_gap) {
      s.min_gap = h;
      s.argmin = x;
    }
    if (i > 0 && x <= s.x0 && h < prev) s.increasing_before_x0 = false;
    prev = h;
  }
  s.h0 = lemma84_gap(0.0, s.theta);
  s.h1 = lemma84_gap(1.0, s.theta);
  s.pass = s.min_gap >= -1e-10 && std::abs(s.h0) <= 1e-10 && std::abs(s.h1) <= 1e-10;
  return s;
}

Lemma83Result lemma83_check(const Measure1D& mu, double x) {
  if (!mu.symmetric()) throw InvalidParameter("lemma83_check: measure must be symmetric");
  if (!(x >= 0.0)) throw InvalidParameter("lemma83_check: x must be nonnegative");
  Lemma83Result r{};
  r.lhs = mu.closed_form_cramer() ? (*mu.closed_form_cramer())(x) : cramer_numeric(mu, x);
  r.rhs = -mu.log_sf(x);
  r.ok = r.lhs <= r.rhs + 1e-8;
  return r;
}

HensleyResult hensley_check(const Measure1D& mu) {
  if (!mu.symmetric()) throw InvalidParameter("hensley_check: measure must be even");
  if (std::abs(mu.total_mass() - 1.0) > 1e-6) {
    throw InvalidParameter("hensley_check: measure is not normalized");
  }
  if (std::abs(mu.second_moment() - 1.0) > 1e-6) {
    throw InvalidParameter("hensley_check: second moment must be 1");
  }
  const double edge = std::min(mu.support().hi, 50.0);
  double prev = mu.density(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double g = mu.density(edge * i / 1000.0);
    if (g > prev * (1.0 + 1e-12) + 1e-300) {
      throw InvalidParameter("hensley_check: density increases on [0, inf)");
    }
    prev = g;
  }
  HensleyResult r{};
  r.g0 = mu.density(0.0);
  r.bound = 0.5 / std::numbers::sqrt3;
  r.ok = r.g0 >= r.bound - 1e-10;
  return r;
}

double hensley_m(double c) {
  if (!(c > 0.0)) throw InvalidParameter("hensley_m: c must be positive");
  return 1.0 / (12.0 * c * c);
}

DominationReport transport_ic_cost_domination(const Measure1D& target, double c, double x_max,
                                              std::size_t n) {
  const TransportMap T(target);
  if (c < T.derivative_at_zero() * (1.0 - 1e-9)) {
    throw InvalidParameter("domination: c = " + std::to_string(c) + " is below T'(0) = " +
                           std::to_string(T.derivative_at_zero()));
  }
  if (!(x_max > 0.0) || n < 2) throw InvalidParameter("domination: need x_max > 0 and n >= 2");

  DominationReport r;
  const DeltaSolution d = solve_delta(c);
  std::function<double(double)> target_cramer;
  if (target.closed_form_cramer()) {
    target_cramer = *target.closed_form_cramer();
  } else {
    // Arguments T(x)/beta stay below T(x_max)/beta.
    const double cover = 2.0 * T(x_max) / (2.0 * c * d.delta) + 1.0;
    auto table = std::make_shared<EvenCramerTable>(
        [&target](double t) { return log_mgf_with_derivative(target, t); },
        std::max(target.support().hi, -target.support().lo), cover);
    target_cramer = [table](double y) { return (*table)(y); };
  }

  const double theta = solve_theta();
  r.c = c;
  r.delta = d.delta;
  r.beta = 2.0 * c * d.delta;
  r.x_max = x_max;
  r.n = n;
  const double beta = r.beta;

  std::vector<double> xs;
  xs.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    xs.push_back(x_max * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  const double corner = beta / c;
  if (corner <= x_max) xs.push_back(corner);

  for (const double x : xs) {
    const double rhs = exp_sym_cramer(0.5 * x);
    const double r1 = c * x / beta;
    const double tx = T(x);
    double bound;
    if (r1 <= 1.0) {
      bound = lncosh_conjugate(r1);
      const double t_scaled = T(x / beta);
      const double links[] = {t_scaled - tx / beta, c * x / beta - t_scaled,
                              exp_sym_cramer(theta * r1) - bound,
                              rhs - exp_sym_cramer(theta * r1)};
      for (double l : links) r.worst_chain_margin = std::min(r.worst_chain_margin, l);
    } else {
      bound = x / beta + kLn2;
    }
    const double margin = rhs - bound;
    if (margin < r.worst_margin) {
      r.worst_margin = margin;
      r.worst_x = x;
    }
    const double actual = rhs - target_cramer(tx / beta);
    if (actual < r.worst_actual_margin) {
      r.worst_actual_margin = actual;
      r.worst_actual_x = x;
    }
  }
  r.boundary_margin = exp_sym_cramer(0.5 * corner) - (1.0 / c + kLn2);
  r.pass = r.worst_margin >= -1e-8 && r.worst_chain_margin >= -1e-8 &&
           r.worst_actual_margin >= -1e-8;
  return r;
}

TransportDiagnostics transport_diagnostics(const Measure1D& target, double c) {
  const TransportMap T(target);
  TransportDiagnostics d;
  d.target = target.name();
  d.derivative_at_zero = T.derivative_at_zero();

  constexpr int kHalf = 1000;
  constexpr double kReach = 50.0;
  std::vector<double> pos(kHalf + 1);
  for (int i = 0; i <= kHalf; ++i) {
    const double x = kReach * i / kHalf;
    pos[i] = T(x);
    const double neg = T(-x);
    d.oddness = std::max(d.oddness, std::abs(pos[i] + neg));
    d.pushforward_error = std::max(d.pushforward_error, std::abs(target.cdf(pos[i]) - nu_cdf(x)));
    d.pushforward_error = std::max(d.pushforward_error, std::abs(target.cdf(neg) - nu_cdf(-x)));
    if (i > 0) {
      d.monotone_violation = std::max(d.monotone_violation, pos[i - 1] - pos[i]);
      d.monotone_violation = std::max(d.monotone_violation, neg - T(-kReach * (i - 1) / kHalf));
    }
  }
  for (int i = 1; i < kHalf; ++i) {
    d.concavity_violation =
        std::max(d.concavity_violation, 0.5 * (pos[i - 1] + pos[i + 1]) - pos[i]);
  }
  // Inverting T at x loses about eps T(x) / T'(x) in x; skip points where that alone
  // exceeds 1e-7 (only bounded targets reach this, far out in the tail).
  for (int i = 0; i <= 500; ++i) {
    const double x = kReach * i / 500.0;
    const double tx = T(x);
    const double slope = 0.5 * std::exp(-x - target.log_density(tx));
    if (4e-16 * std::max(1.0, tx) > 1e-7 * slope) break;
    d.omega_checked_to = x;
    d.omega_error = std::max(d.omega_error, std::abs(modulus_omega(T, 2.0 * tx) - 2.0 * x));
  }
  d.domination = transport_ic_cost_domination(target, c);
  d.pass = d.oddness <= 1e-8 && d.monotone_violation <= 1e-8 && d.concavity_violation <= 1e-8 &&
           d.pushforward_error <= 1e-8 && d.omega_error <= 1e-6 && d.domination.pass;
  return d;
}

}  // namespace tauforge
