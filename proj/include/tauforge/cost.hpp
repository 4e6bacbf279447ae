#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "tauforge/measures.hpp"

namespace tauforge {

/// Cost W: R -> [0, inf] with an optional analytic derivative.
struct CostFunction {
  std::string label;
  RealFn eval;
  std::optional<RealFn> derivative;

  double operator()(double x) const { return eval(x); }
  /// Analytic derivative, else a central difference with step 1e-6 max(1, |x|).
  double slope(double x) const;
};

/// W(x) = Lambda*_{mu-bar}(x / beta). Closed forms for the Gaussian and exponential
/// families, a tabulated numeric transform for everything else.
CostFunction ic_cost(const Measure1D& mu, double beta);

/// x^2/36 for |x| <= 4, (2/9)(|x| - 2) beyond.
double maurey_cost_U(double x);
CostFunction maurey_cost();
/// a |x|
CostFunction linear_cost(double a);
/// a x^2
CostFunction quadratic_cost(double a);
CostFunction zero_cost();

/// "ic:<measure>:<beta>", "maurey", "linear:<a>", "quadratic:<a>", "zero".
CostFunction cost_from_spec(std::string_view spec);

}  // namespace tauforge
