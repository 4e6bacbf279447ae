#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tauforge/cost.hpp"
#include "tauforge/grid_function.hpp"
#include "tauforge/measures.hpp"

namespace tauforge {

enum class Verdict { pass, inconclusive, fail };
const char* to_string(Verdict v);

struct TauOptions {
  double pass_slack = 1e-6;   // pass when product <= 1 + pass_slack
  double fail_margin = 1e-4;  // fail when product > 1 + fail_margin
  double rel_tol = 1e-10;     // Gauss-Kronrod tolerance on the left integral
};

struct TauReport {
  std::string member;
  double integral_left = 0.0;   // int e^{W box f} dmu
  double integral_right = 0.0;  // int e^{-f} dmu
  double product = 0.0;
  bool pass = false;
  Verdict verdict = Verdict::inconclusive;
};

/// Pointwise (W box f)(x) = inf_y W(x - y) + f(y) for convex W and the piecewise
/// linear interpolant of f continued flat past its grid.
///
/// A phase-split table of W gives approximate node values in one vector pass; cells
/// whose approximate value is within the interpolation error band of the minimum
/// are then minimised exactly (the cell objective is convex, its minimiser is
/// (W')^{-1}(slope) clamped to the cell).
class InfConvEvaluator {
 public:
  InfConvEvaluator(const CostFunction& w, const GridFunction& f);

  double operator()(double x) const;

  /// Offsets beyond which W exceeds osc(f); past f.lo - reach_right()
  /// the value is f.front(), past f.hi + reach_left() it is f.back().
  double reach_left() const { return reach_left_; }
  double reach_right() const { return reach_right_; }
  double inf_f() const { return inf_f_; }
  double sup_f() const { return sup_f_; }
  const GridFunction& f() const { return f_; }

 private:
  double minimiser_for_slope(double s) const;
  double cell_value(std::size_t i, double x) const;

  CostFunction w_;
  GridFunction f_;
  double inf_f_;
  double sup_f_;
  double reach_left_;   // W(z) beyond threshold for z < -reach_left_
  double reach_right_;  // ... for z > reach_right_
  double zstar0_;
  std::vector<double> slope_;
  std::vector<double> zstar_;
  // Table of W on [zmin, zmin + (rows*P) ht], split by residue mod P; stored reversed.
  static constexpr std::size_t kPhases = 4;
  double zmin_;
  double ht_;
  std::size_t rows_;
  std::vector<std::vector<double>> phase_rev_;
  double band_;
  mutable std::vector<double> scratch_;
  mutable std::vector<std::uint32_t> picks_;
};

TauReport tau_functional(const Measure1D& mu, const CostFunction& w, const GridFunction& f,
                         const TauOptions& opt = {});

struct FamilyMember {
  std::string label;
  GridFunction f;
};

struct FamilySpec {
  GridSpec grid{};
  std::uint64_t seed = 20240613;
};

/// 60 clipped linear, 40 clipped quadratic, 90 seeded random piecewise-linear
/// functions and 10 clipped copies of W.
std::vector<FamilyMember> default_family(const CostFunction& w, const FamilySpec& spec = {});
/// A single CSV, or a text file listing one CSV path per line (relative to the list).
std::vector<FamilyMember> family_from_file(const std::string& path);

struct SuiteResult {
  std::string measure;
  double beta = 0.0;
  std::vector<TauReport> reports;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t inconclusive = 0;
  double max_product = 0.0;
  std::string worst_member;

  bool all_pass() const { return passed == reports.size(); }
};

SuiteResult ic_suite(const Measure1D& mu, double beta, const std::vector<FamilyMember>& family,
                     const TauOptions& opt = {});
SuiteResult ic_suite(const Measure1D& mu, double beta, const FamilySpec& spec = {},
                     const TauOptions& opt = {});

struct Lemma52Result {
  double left;   // int e^{2 Lambda*_{mu-bar}(x/2)} dmu
  double right;  // int e^{-Lambda*_{mu-bar}(x)} dmu
  double value;
};
/// Throws DivergenceError when the left integral does not converge.
Lemma52Result lemma52_integrals(const Measure1D& mu);
double lemma52_test(const Measure1D& mu);

struct CounterexampleIntegrals {
  double i1, i2, i3, i4;
  double p1;  // 2 I1 I2
  double p2;  // 8 I3 I4
};
CounterexampleIntegrals counterexample_integrals();

struct Lemma51Report {
  double x_max = 0.0;
  std::size_t n = 0;
  bool slope_ok = true;        // 2|W'| <= 1
  bool exponential_ok = true;  // e^W (1 - 4 W'^2) >= 1 - 1e-10
  double worst_slope_margin = kInf;  // min of 1 - 2|W'|
  double worst_slope_x = 0.0;
  double worst_exponential_margin = kInf;  // min of e^W (1 - 4W'^2) - 1
  double worst_exponential_x = 0.0;

  bool pass() const { return slope_ok && exponential_ok; }
};
Lemma51Report lemma51_conditions(const CostFunction& w, double x_max, std::size_t n);

}  // namespace tauforge
