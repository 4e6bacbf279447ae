#include "tauforge/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "tauforge/quadrature.hpp"

namespace tauforge {

namespace {

// sqrt(1 + |x|) - 1 without cancellation.
double root_gap(double x) {
  const double a = std::abs(x);
  return a / (std::sqrt(1.0 + a) + 1.0);
}

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Box-Muller on the portable uniform, so sample streams match across standard libraries.
double normal(std::mt19937_64& rng) {
  double u = u01(rng);
  while (u == 0.0) u = u01(rng);
  const double v = u01(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

// Radius r >= 0 with g(r) = level for g nondecreasing, g(0) = 0.
template <class G>
double ray_radius(G&& g, double level) {
  if (level <= 0.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (g(hi) < level) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (lo + hi);
    if (!(m > lo && m < hi)) break;
    (g(m) < level ? lo : hi) = m;
  }
  return lo;  // stays inside the sublevel set
}

void keep_witnesses(InclusionReport& r, std::vector<Witness>& all, const Witness& worst,
                    std::size_t max_witnesses) {
  if (max_witnesses == 0) return;
  const std::size_t stride = std::max<std::size_t>(1, all.size() / max_witnesses);
  for (std::size_t i = 0; i < all.size() && r.witnesses.size() + 1 < max_witnesses; i += stride) {
    r.witnesses.push_back(all[i]);
  }
  r.witnesses.push_back(worst);
}

}  // namespace

Profile concentration_profile(double a, double t) {
  if (!(a > 0.0 && a <= 1.0)) throw InvalidParameter("concentration_profile: need 0 < a <= 1");
  if (!(t >= 0.0)) throw InvalidParameter("concentration_profile: need t >= 0");
  const double et = std::exp(-t);
  return {a / (a + (1.0 - a) * et), 1.0 - et / a};
}

double lemma62_gap(double x) {
  const double q = root_gap(x);
  return exp_sym_cramer(x) - q * q;
}

TwoLevel two_level_decompose(double u) {
  const double y = std::copysign(8.0 * root_gap(u), u);
  return {y, u - 0.25 * y};
}

CostFunction reference_cost() {
  CostFunction w;
  w.label = "2*cramer_nu(x/4)";
  w.eval = [](double x) { return 2.0 * exp_sym_cramer(0.25 * x); };
  w.derivative = [](double x) { return 0.5 * exp_sym_cramer_derivative(0.25 * x); };
  return w;
}

InclusionReport ball_inclusion_1d(const CostFunction& w, double t, std::size_t n_samples,
                                  std::size_t max_witnesses) {
  if (!(t > 0.0)) throw InvalidParameter("ball_inclusion_1d: t must be positive");
  if (n_samples == 0) throw InvalidParameter("ball_inclusion_1d: need at least one sample");
  InclusionReport r;
  r.t = t;
  r.dim = 1;
  const double level = 2.0 * t;
  auto boundary = [&](double sign) {
    double inside = 0.0;
    for (double z = 1.0; z <= 1e6; z *= 2.0) {
      if (w(sign * z) > level) {
        return sign * quad::bisect([&](double s) { return w(sign * s) - level; }, inside, z,
                                   1e-13 * z);
      }
      inside = z;
    }
    r.bounded_sublevel = false;
    return sign * 1e6;
  };
  r.boundary_lo = boundary(-1.0);
  r.boundary_hi = boundary(1.0);

  std::vector<Witness> all;
  all.reserve(n_samples);
  Witness worst{};
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double x = n_samples == 1 ? 0.0
                                    : r.boundary_lo + (r.boundary_hi - r.boundary_lo) *
                                                          static_cast<double>(i) /
                                                          static_cast<double>(n_samples - 1);
    const double u = 0.25 * x;
    const TwoLevel d = two_level_decompose(u);
    const double slack = 0.5 * w(x) - std::max(std::abs(d.z), (d.y / 8.0) * (d.y / 8.0));
    const Witness wit{x, d.y, x - d.y, slack};
    all.push_back(wit);
    if (slack < r.worst_slack) {
      r.worst_slack = slack;
      r.worst_x = x;
      worst = wit;
    }
    if (slack < 0.0 && slack >= -1e-9) ++r.rounding_flags;
    r.worst_l1_margin = std::min(r.worst_l1_margin, 4.0 * t - std::abs(wit.z));
    r.worst_l2_margin = std::min(r.worst_l2_margin, 8.0 * std::sqrt(t) - std::abs(wit.y));
  }
  r.samples_checked = n_samples;
  keep_witnesses(r, all, worst, max_witnesses);
  r.pass = r.worst_slack >= -1e-9 && r.worst_l1_margin >= -1e-9 && r.worst_l2_margin >= -1e-9;
  return r;
}

InclusionReport ball_inclusion_nd(double t, std::size_t dim, std::size_t n_samples,
                                  std::uint64_t seed, std::size_t max_witnesses) {
  if (!(t > 0.0)) throw InvalidParameter("ball_inclusion_nd: t must be positive");
  if (dim == 0) throw InvalidParameter("ball_inclusion_nd: dimension must be at least 1");
  if (n_samples == 0) throw InvalidParameter("ball_inclusion_nd: need at least one sample");
  InclusionReport r;
  r.t = t;
  r.dim = dim;
  const double level = 2.0 * t;
  auto w1 = [](double x) { return 2.0 * exp_sym_cramer(0.25 * x); };

  std::mt19937_64 rng(seed);
  std::vector<double> dir(dim);
  std::vector<double> x(dim);
  std::vector<Witness> all;
  all.reserve(n_samples);
  Witness worst{};
  for (std::size_t k = 0; k < n_samples; ++k) {
    double target = level;
    if (k % 8 == 0) {
      // Everything on one axis: the l1-dominated end of the sublevel set.
      std::fill(dir.begin(), dir.end(), 0.0);
      dir[(k / 8) % dim] = (k / 8) % 2 == 0 ? 1.0 : -1.0;
    } else {
      double norm = 0.0;
      do {
        norm = 0.0;
        for (auto& v : dir) {
          v = normal(rng);
          norm += v * v;
        }
      } while (norm == 0.0);
      norm = std::sqrt(norm);
      for (auto& v : dir) v /= norm;
      if (k % 8 != 1) target = level * u01(rng);
    }
    auto wn_along = [&](double rad) {
      quad::CompensatedSum s;
      for (std::size_t i = 0; i < dim; ++i) s.add(w1(rad * dir[i]));
      return s.value();
    };
    const double rad = ray_radius(wn_along, target);

    double l1 = 0.0;
    double l2sq = 0.0;
    Witness big{0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < dim; ++i) {
      x[i] = rad * dir[i];
      const TwoLevel d = two_level_decompose(0.25 * x[i]);
      const double z = x[i] - d.y;
      l1 += std::abs(z);
      l2sq += d.y * d.y;
      if (std::abs(x[i]) >= std::abs(big.x)) big = {x[i], d.y, z, 0.0};
    }
    const double m1 = 4.0 * t - l1;
    const double m2 = 8.0 * std::sqrt(t) - std::sqrt(l2sq);
    const double slack = std::min(m1, m2);
    big.slack = slack;
    all.push_back(big);
    r.worst_l1_margin = std::min(r.worst_l1_margin, m1);
    r.worst_l2_margin = std::min(r.worst_l2_margin, m2);
    if (slack < r.worst_slack) {
      r.worst_slack = slack;
      r.worst_x = wn_along(rad);
      worst = big;
    }
    if (slack < 0.0 && slack >= -1e-9) ++r.rounding_flags;
  }
  r.samples_checked = n_samples;
  keep_witnesses(r, all, worst, max_witnesses);
  r.pass = r.worst_slack >= -1e-9;
  return r;
}

McResult mc_concentration(std::size_t dim, double t, std::size_t trials, std::uint64_t seed) {
  if (trials < 1000) throw InvalidParameter("mc_concentration: need at least 1000 trials");
  if (dim == 0) throw InvalidParameter("mc_concentration: dimension must be at least 1");
  if (!(t >= 0.0)) throw InvalidParameter("mc_concentration: t must be nonnegative");
  McResult m;
  m.dim = dim;
  m.t = t;
  m.trials = trials;
  m.seed = seed;
  // Membership in A + 4t B_1 + 8 sqrt(t) B_2 for A = {x_1 <= 0} depends on x_1 only.
  m.threshold = 4.0 * t + 8.0 * std::sqrt(t);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const std::uint64_t bits = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(i)));
    const double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    const double x1 = u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
    if (x1 <= m.threshold) ++hits;
  }
  m.empirical = static_cast<double>(hits) / static_cast<double>(trials);
  m.exact = 1.0 - 0.5 * std::exp(-m.threshold);
  m.bound = 1.0 - 0.5 * std::exp(-t);
  m.sigma = std::sqrt(m.empirical * (1.0 - m.empirical) / static_cast<double>(trials));
  m.pass = m.empirical >= m.bound - 3.0 * m.sigma;
  return m;
}

}  // namespace tauforge
