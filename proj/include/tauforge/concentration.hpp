#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tauforge/cost.hpp"

namespace tauforge {

struct Profile {
  double sharp;  // e^t a / ((e^t - 1) a + 1)
  double weak;   // 1 - e^{-t} / a
};
/// Throws InvalidParameter unless 0 < a <= 1 and t >= 0.
Profile concentration_profile(double a, double t);

/// Lambda*_nu(x) - (sqrt(1 + |x|) - 1)^2.
double lemma62_gap(double x);

struct TwoLevel {
  double y;  // 8 sgn(x) (sqrt(1 + |x|) - 1)
  double z;  // x - y/4, with |z| = (y/8)^2
};
/// Splits u into the pieces used for the l1 + l2 ball cover: a point 4u of the
/// W-ball is y (l2 part) plus 4z (l1 part).
TwoLevel two_level_decompose(double u);

/// W(x) = 2 Lambda*_nu(x/4), the cost whose sublevel sets are covered.
CostFunction reference_cost();

struct Witness {
  double x;  // sampled point
  double y;  // l2 part
  double z;  // l1 part, x = y + z
  double slack;
};

struct InclusionReport {
  double t = 0.0;
  std::size_t dim = 1;
  std::size_t samples_checked = 0;
  double worst_slack = kInf;  // pass iff >= -1e-9
  double worst_x = 0.0;
  double worst_l1_margin = kInf;  // 4t - |z|_1
  double worst_l2_margin = kInf;  // 8 sqrt(t) - |y|_2
  std::size_t rounding_flags = 0;  // slacks in [-1e-9, 0)
  bool bounded_sublevel = true;
  double boundary_lo = 0.0;  // W(boundary) = 2t
  double boundary_hi = 0.0;
  std::vector<Witness> witnesses;
  bool pass = false;
};

/// Samples B_W(2t) on an even grid between the two boundary points and checks the
/// sufficient condition W(x)/2 >= max(|u - y/4|, (y/8)^2) at u = x/4.
InclusionReport ball_inclusion_1d(const CostFunction& w, double t, std::size_t n_samples,
                                  std::size_t max_witnesses = 32);

/// Seeded points of {W_n <= 2t}, W_n = sum of the reference cost over coordinates;
/// checks |y|_1 <= 4t and |z|_2 <= 8 sqrt t for the coordinatewise split.
/// The worst slack is min(4t - |z|_1, 8 sqrt t - |y|_2) (the l1 part is z, the l2 part y).
InclusionReport ball_inclusion_nd(double t, std::size_t dim, std::size_t n_samples,
                                  std::uint64_t seed, std::size_t max_witnesses = 32);

struct McResult {
  std::size_t dim = 0;
  double t = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double threshold = 0.0;  // the enlarged half-space is {x_1 <= threshold}
  double empirical = 0.0;
  double exact = 0.0;  // nu(-inf, threshold]
  double bound = 0.0;  // 1 - e^{-t}/2
  double sigma = 0.0;
  bool pass = false;  // empirical >= bound - 3 sigma
};
/// Monte-Carlo mass of A + 4t B_1 + 8 sqrt(t) B_2 for the half-space A = {x_1 <= 0}
/// under the product of symmetric exponentials. Throws InvalidParameter for fewer
/// than 1000 trials.
McResult mc_concentration(std::size_t dim, double t, std::size_t trials, std::uint64_t seed);

}  // namespace tauforge
