#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "tauforge/errors.hpp"
#include "tauforge/quadrature.hpp"

namespace tauforge {

using RealFn = std::function<double(double)>;

struct Interval {
  double lo = -kInf;
  double hi = kInf;

  bool contains(double x) const { return x >= lo && x <= hi; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

/// Cramer transform of the symmetric exponential distribution,
/// sqrt(x^2+1) - 1 - ln((sqrt(x^2+1)+1)/2), in a cancellation-free form.
double exp_sym_cramer(double x);
/// Its derivative x / (sqrt(x^2+1) + 1).
double exp_sym_cramer_derivative(double x);

/// A probability measure on the real line with a density.
///
/// Instances are immutable once built; every accessor is const and the
/// callables captured at construction never mutate shared state, so a measure
/// may be read from several threads.
class Measure1D {
 public:
  struct Parts {
    std::string name;
    RealFn log_density;  // -inf outside the support
    RealFn cdf;
    RealFn sf;           // upper tail mu[x, inf)
    RealFn log_cdf;
    RealFn log_sf;
    RealFn quantile;     // optional; bisection on the cdf when empty
    Interval support;
    bool symmetric = false;
    double center = 0.0;  // a mode; quadrature splits here
    std::optional<RealFn> log_mgf;
    std::optional<RealFn> cramer;
    std::optional<RealFn> cramer_derivative;
    /// Cramer transform of the symmetrization, when known in closed form.
    std::optional<RealFn> symmetrized_cramer;
    std::optional<RealFn> symmetrized_cramer_derivative;
  };

  explicit Measure1D(Parts parts);

  const std::string& name() const { return p_.name; }
  double density(double x) const { return std::exp(p_.log_density(x)); }
  double log_density(double x) const { return p_.log_density(x); }
  double cdf(double x) const { return p_.cdf(x); }
  double sf(double x) const { return p_.sf(x); }
  double log_cdf(double x) const { return p_.log_cdf(x); }
  double log_sf(double x) const { return p_.log_sf(x); }
  /// Inverse cdf on (0, 1); bisection to 1e-12 unless a closed form was supplied.
  double quantile(double p) const;

  const Interval& support() const { return p_.support; }
  bool symmetric() const { return p_.symmetric; }
  double center() const { return p_.center; }
  double second_moment() const { return second_moment_; }

  const std::optional<RealFn>& closed_form_log_mgf() const { return p_.log_mgf; }
  const std::optional<RealFn>& closed_form_cramer() const { return p_.cramer; }
  const std::optional<RealFn>& closed_form_cramer_derivative() const {
    return p_.cramer_derivative;
  }
  const std::optional<RealFn>& closed_form_symmetrized_cramer() const {
    return p_.symmetrized_cramer;
  }
  const std::optional<RealFn>& closed_form_symmetrized_cramer_derivative() const {
    return p_.symmetrized_cramer_derivative;
  }

  /// Integral of h against the measure.
  template <class H>
  double expect(H&& h) const {
    auto integrand = [&](double x) {
      const double g = density(x);
      return g == 0.0 ? 0.0 : h(x) * g;
    };
    return quad::integrate_line(integrand, p_.support.lo, p_.support.hi, p_.center);
  }

  double total_mass() const;

 private:
  Parts p_;
  double second_moment_ = 0.0;
};

Measure1D make_gaussian(double mean, double variance);
Measure1D make_exponential_one_sided();
Measure1D make_symmetric_exponential();

/// Convex even potential W with density proportional to exp(-W). Returns +inf
/// outside its domain.
struct Potential {
  std::string label;
  RealFn value;
};

/// "abs", "square", "power:<p>", "uniform".
Potential potential_from_spec(std::string_view spec);

/// Measure with density proportional to exp(-W). With `normalize`, rescaled by
/// x -> x / sigma so that the second moment is 1.
Measure1D make_logconcave_even(const Potential& potential, bool normalize);

/// "gaussian", "exp+", "exp-sym", "logconcave:<potential-spec>" (always isotropic).
Measure1D measure_from_name(std::string_view name);

/// Numeric log-Laplace transform ln int e^{ty} dmu(y), computed around the peak of
/// ty + ln g(y) so that large values do not overflow. Returns +inf when the
/// integrand does not decay.
double log_mgf_numeric(const Measure1D& mu, double t);
/// {Lambda(t), Lambda'(t)} by quadrature; both +inf outside the domain.
std::pair<double, double> log_mgf_with_derivative(const Measure1D& mu, double t);
/// Closed-form Lambda when the measure has one, otherwise the numeric transform.
double log_mgf(const Measure1D& mu, double t);

/// The law of X1 - X2 for independent X1, X2 ~ mu, carried through its
/// log-Laplace transform Lambda(t) + Lambda(-t).
class SymmetrizedMeasure {
 public:
  explicit SymmetrizedMeasure(Measure1D base);

  const Measure1D& base() const { return base_; }
  double log_mgf(double t) const;
  const std::optional<RealFn>& closed_form_cramer() const { return cramer_; }
  const std::optional<RealFn>& closed_form_cramer_derivative() const { return cramer_slope_; }

 private:
  Measure1D base_;
  std::optional<RealFn> cramer_;
  std::optional<RealFn> cramer_slope_;
};

SymmetrizedMeasure symmetrize(const Measure1D& mu);

}  // namespace tauforge
