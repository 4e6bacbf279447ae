#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "tauforge/grid_function.hpp"
#include "tauforge/measures.hpp"

namespace tauforge {

struct SlopeRange {
  double lo;
  double hi;
};

/// Range of the finite-difference slopes of f over its finite block; [-1, 1]
/// around the single slope when there is at most one.
SlopeRange default_slope_range(const GridFunction& f);

/// Conjugate values together with the grid index attaining each maximum.
struct LegendreSamples {
  std::vector<double> values;
  std::vector<std::size_t> argmax;
};

/// g(s_k) = max_j (s_k y_j - f_j) at m slopes spread evenly over [slope_lo, slope_hi].
/// Convex inputs go through the linear-time sweep, anything else through the full scan.
GridFunction legendre(const GridFunction& f, double slope_lo, double slope_hi, std::size_t m);
GridFunction legendre(const GridFunction& f, std::size_t m);

/// Quadratic-time reference scan (vectorised inner loop).
LegendreSamples legendre_scan(const GridFunction& f, double slope_lo, double slope_hi,
                              std::size_t m);
/// Monotone-argmax sweep; requires f convex on its grid.
LegendreSamples legendre_sweep(const GridFunction& f, double slope_lo, double slope_hi,
                               std::size_t m);

/// f** on f's own grid, passing through the slope range of f.
GridFunction biconjugate(const GridFunction& f);

/// M_mu(t) by quadrature; +inf when the integral diverges.
double laplace(const Measure1D& mu, double t);

/// Interval of t where a log-Laplace transform is finite (ends are the last finite
/// points found, or +-cap when it never blows up).
struct LambdaDomain {
  double lo;
  double hi;
};
LambdaDomain find_lambda_domain(const std::function<double(double)>& log_mgf, double cap = 1e6);

/// sup_t (x t - Lambda(t)) for a convex Lambda with Lambda(0) = 0.
double cramer_from_log_mgf(const std::function<double(double)>& log_mgf, double x,
                           const LambdaDomain& domain);
double cramer_numeric(const Measure1D& mu, double x);
double cramer_numeric(const SymmetrizedMeasure& mu, double x);

/// Cramer transform of an even log-Laplace transform, tabulated along the curve
/// (Lambda'(t), t Lambda'(t) - Lambda(t)) and interpolated by cubic Hermite pieces
/// whose end slopes are the t values.
class EvenCramerTable {
 public:
  /// t -> {Lambda(t), Lambda'(t)} for t >= 0.
  using LogMgfWithSlope = std::function<std::pair<double, double>(double)>;

  /// support_edge: sup |y| over the support (+inf if unbounded).
  EvenCramerTable(const LogMgfWithSlope& lambda, double support_edge, double x_cover = 1e4);

  double operator()(double x) const;
  double derivative(double x) const;
  std::size_t nodes() const { return xs_.size(); }

 private:
  std::vector<double> xs_;
  std::vector<double> values_;
  std::vector<double> ts_;
  double support_edge_;
};

struct IdentityReport {
  double discrepancy;  // sup |(f box g)* - (f* + g*)| over the slope grid
  double worst_slope;
  SlopeRange slopes;
  std::size_t m;
};

/// Checks (f box g)* = f* + g* for convex f and g on a shared slope grid.
IdentityReport conjugate_sum_identity(const GridFunction& f, const GridFunction& g,
                                      std::size_t m = 4096);

}  // namespace tauforge
