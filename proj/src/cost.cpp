#include "tauforge/cost.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>

#include "tauforge/convex_transforms.hpp"

namespace tauforge {

namespace {

double parse_real(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw InvalidParameter("cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

double CostFunction::slope(double x) const {
  if (derivative) return (*derivative)(x);
  const double h = 1e-6 * std::max(1.0, std::abs(x));
  return (eval(x + h) - eval(x - h)) / (2.0 * h);
}

CostFunction ic_cost(const Measure1D& mu, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidParameter("ic_cost: beta must be positive");
  const SymmetrizedMeasure sym = symmetrize(mu);
  CostFunction w;
  w.label = "ic(" + mu.name() + ",beta=" + fmt(beta) + ")";
  if (const auto& closed = sym.closed_form_cramer()) {
    RealFn lstar = *closed;
    w.eval = [lstar, beta](double x) { return lstar(x / beta); };
    if (const auto& d = sym.closed_form_cramer_derivative()) {
      RealFn slope = *d;
      w.derivative = [slope, beta](double x) { return slope(x / beta) / beta; };
    }
    return w;
  }
  const Measure1D base = mu;
  auto lambda = [base](double t) {
    const auto [lp, dp] = log_mgf_with_derivative(base, t);
    const auto [lm, dm] = log_mgf_with_derivative(base, -t);
    if (!std::isfinite(lp) || !std::isfinite(lm)) return std::pair{kInf, kInf};
    return std::pair{lp + lm, dp - dm};
  };
  const Interval& s = mu.support();
  const double edge = s.bounded() ? 2.0 * std::max(std::abs(s.lo), std::abs(s.hi)) : kInf;
  auto table = std::make_shared<const EvenCramerTable>(lambda, edge);
  w.eval = [table, beta](double x) { return (*table)(x / beta); };
  w.derivative = [table, beta](double x) { return table->derivative(x / beta) / beta; };
  return w;
}

double maurey_cost_U(double x) {
  const double a = std::abs(x);
  return a <= 4.0 ? x * x / 36.0 : (2.0 / 9.0) * (a - 2.0);
}

CostFunction maurey_cost() {
  return {"maurey", [](double x) { return maurey_cost_U(x); }, [](double x) {
            const double a = std::abs(x);
            return a <= 4.0 ? x / 18.0 : std::copysign(2.0 / 9.0, x);
          }};
}

CostFunction linear_cost(double a) {
  if (!(a >= 0.0)) throw InvalidParameter("linear cost needs a >= 0");
  return {"linear:" + fmt(a), [a](double x) { return a * std::abs(x); },
          [a](double x) { return x == 0.0 ? 0.0 : std::copysign(a, x); }};
}

CostFunction quadratic_cost(double a) {
  if (!(a > 0.0)) throw InvalidParameter("quadratic cost needs a > 0");
  return {"quadratic:" + fmt(a), [a](double x) { return a * x * x; },
          [a](double x) { return 2.0 * a * x; }};
}

CostFunction zero_cost() {
  return {"zero", [](double) { return 0.0; }, [](double) { return 0.0; }};
}

CostFunction cost_from_spec(std::string_view spec) {
  if (spec == "maurey") return maurey_cost();
  if (spec == "zero") return zero_cost();
  if (spec.starts_with("linear:")) return linear_cost(parse_real(spec.substr(7), "slope"));
  if (spec.starts_with("quadratic:")) {
    return quadratic_cost(parse_real(spec.substr(10), "coefficient"));
  }
  if (spec.starts_with("ic:")) {
    const auto rest = spec.substr(3);
    const auto colon = rest.rfind(':');
    if (colon == std::string_view::npos) {
      throw InvalidParameter("ic cost spec must be ic:<measure>:<beta>");
    }
    return ic_cost(measure_from_name(rest.substr(0, colon)),
                   parse_real(rest.substr(colon + 1), "beta"));
  }
  throw InvalidParameter("unknown cost spec '" + std::string(spec) +
                         "' (expected ic:<measure>:<beta>, maurey, linear:<a>, quadratic:<a>, zero)");
}

}  // namespace tauforge
