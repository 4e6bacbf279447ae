#pragma once

#include <cstddef>
#include <string>

#include "tauforge/measures.hpp"

namespace tauforge {

/// Increasing rearrangement T = F_mu^{-1} o F_nu from the symmetric exponential law
/// nu (density e^{-|x|}/2) onto an even, isotropic log-concave target mu.
///
/// T(x) solves ln mu[T, inf) = ln nu[x, inf) = -ln 2 - x for x >= 0 and the
/// matching lower-tail equation for x < 0, so far tails keep full relative accuracy.
class TransportMap {
 public:
  /// Throws InvalidParameter for an asymmetric or non-isotropic target, or one
  /// whose density vanishes at 0.
  explicit TransportMap(Measure1D target);

  double operator()(double x) const;
  /// T^{-1}(y) by bisection on T (tolerance 1e-12); +-inf outside the range of T.
  double inverse(double y) const;
  /// 1 / (2 g_mu(0)).
  double derivative_at_zero() const { return slope0_; }
  /// sup T = right end of the target's support.
  double sup() const { return target_.support().hi; }
  const Measure1D& target() const { return target_; }

 private:
  Measure1D target_;
  double slope0_;
};

TransportMap build_transport(const Measure1D& target);

/// omega_T(h) = inf{|x - y| : |T(x) - T(y)| >= h} = 2 T^{-1}(h/2); +inf when h/2 >= sup T.
double modulus_omega(const TransportMap& T, double h);

/// Root of Lambda*_nu(theta) = ln 2 on [sqrt 2, 10].
double solve_theta();

struct DeltaSolution {
  double c;
  double delta;     // Lambda*_nu(delta) = ln 2 + 1/c
  double C;         // 2 c delta
  double residual;  // Lambda*_nu(delta) - ln 2 - 1/c
};
/// Throws InvalidParameter unless c > 0.
DeltaSolution solve_delta(double c);

/// (ln cosh)*(x) = ((1+x) ln(1+x) + (1-x) ln(1-x)) / 2 with 0 ln 0 = 0.
/// Throws DomainError for |x| > 1.
double lncosh_conjugate(double x);

/// H(x) = Lambda*_nu(theta x) - (ln cosh)*(x).
double lemma84_gap(double x, double theta);
/// x0 = sqrt((4 theta^2 - 3 - sqrt(8 theta^2 + 9)) / (8 theta^2)); H'' > 0 on [0, x0).
double lemma84_inflection(double theta);

struct Lemma84Scan {
  double theta = 0.0;
  std::size_t n = 0;
  double min_gap = 0.0;
  double argmin = 0.0;
  double h0 = 0.0;
  double h1 = 0.0;
  double x0 = 0.0;
  bool increasing_before_x0 = false;
  bool pass = false;  // min >= -1e-10, |H(0)|, |H(1)| <= 1e-10
};
Lemma84Scan lemma84_scan(std::size_t n = 10001);

struct Lemma83Result {
  double lhs;  // Lambda*_mu(x)
  double rhs;  // -ln mu[x, inf)
  bool ok;
};
/// Throws InvalidParameter for an asymmetric measure or x < 0.
Lemma83Result lemma83_check(const Measure1D& mu, double x);

struct HensleyResult {
  double g0;
  double bound;  // 1 / (2 sqrt 3)
  bool ok;
};
/// Validates evenness, unit mass, unit second moment and a nonincreasing density on
/// [0, inf) (InvalidParameter otherwise).
HensleyResult hensley_check(const Measure1D& mu);
/// m(c) = 1 / (12 c^2).
double hensley_m(double c);

struct DominationReport {
  double c = 0.0;
  double delta = 0.0;
  double beta = 0.0;  // 2 c delta
  double x_max = 0.0;
  std::size_t n = 0;
  double worst_margin = kInf;  // min of Lambda*_nu(x/2) - two-case bound
  double worst_x = 0.0;
  double worst_chain_margin = kInf;   // links T(x)/beta <= T(x/beta) <= c x/beta
  double worst_actual_margin = kInf;  // Lambda*_nu(x/2) - Lambda*_mu(T(x)/beta)
  double worst_actual_x = 0.0;
  double boundary_margin = 0.0;  // margin of the affine case at x = beta/c
  bool pass = false;             // all three worst margins >= -1e-8
};
/// Throws InvalidParameter when c < T'(0).
DominationReport transport_ic_cost_domination(const Measure1D& target, double c,
                                              double x_max = 100.0, std::size_t n = 10001);

struct TransportDiagnostics {
  std::string target;
  double derivative_at_zero = 0.0;
  double oddness = 0.0;              // max |T(x) + T(-x)|
  double monotone_violation = 0.0;   // max decrease between consecutive grid points
  double concavity_violation = 0.0;  // max (T(a)+T(b))/2 - T((a+b)/2) on [0, inf)
  double pushforward_error = 0.0;    // max |F_mu(T(x)) - F_nu(x)|
  double omega_error = 0.0;          // max |omega_T(2T(x)) - 2x| on [0, omega_checked_to]
  double omega_checked_to = 0.0;     // 50 unless T flattens below double resolution first
  DominationReport domination;
  bool pass = false;
};
/// Grid checks with 1e-8 slack; c defaults to sqrt 3.
TransportDiagnostics transport_diagnostics(const Measure1D& target, double c = 1.7320508075688772);

}  // namespace tauforge
