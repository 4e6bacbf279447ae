#include "tauforge/tau.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <unordered_map>

#include <boost/math/quadrature/gauss.hpp>

#include "tauforge/quadrature.hpp"
#include "tauforge/simd/kernels.hpp"

namespace tauforge {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Smallest z > 0 (in the direction `sign`) past which w exceeds `level`.
double reach_of(const CostFunction& w, double level, double sign) {
  double inside = 0.0;
  for (double z = 1.0; z <= 1e6; z *= 2.0) {
    if (w(sign * z) > level) {
      return quad::bisect([&](double r) { return w(sign * r) - level; }, inside, z, 1e-9 * z);
    }
    inside = z;
  }
  throw InvalidParameter("cost '" + w.label + "' stays below " + fmt(level) +
                         " out to |x| = 1e6; its infimum convolution has no finite reach");
}

double portable_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

InfConvEvaluator::InfConvEvaluator(const CostFunction& w, const GridFunction& f)
    : w_(w), f_(f) {
  if (!f_.all_finite()) throw InvalidInput("tau: test function must be bounded (finite on its grid)");
  const double w0 = w_(0.0);
  if (!(w0 >= 0.0) || !std::isfinite(w0)) {
    throw InvalidParameter("cost '" + w_.label + "' must be finite and nonnegative at 0");
  }
  inf_f_ = f_.min_value();
  sup_f_ = f_.max_finite();
  // A node with W(x - y) > osc f cannot beat y = x, so the window ends there.
  const double level = (sup_f_ - inf_f_) * (1.0 + 1e-12) + 1e-9;
  reach_left_ = reach_of(w_, level, -1.0);
  reach_right_ = reach_of(w_, level, 1.0);

  const std::size_t n = f_.size();
  const double h = f_.step();
  slope_.resize(n - 1);
  zstar_.resize(n - 1);
  std::unordered_map<double, double> cache;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double s = (f_[i + 1] - f_[i]) / h;
    slope_[i] = s;
    auto it = cache.find(s);
    if (it == cache.end()) it = cache.emplace(s, minimiser_for_slope(s)).first;
    zstar_[i] = it->second;
  }
  zstar0_ = minimiser_for_slope(0.0);

  // Cost table at spacing h / P covering every offset inside the reach.
  ht_ = h / static_cast<double>(kPhases);
  zmin_ = -reach_left_ - 3.0 * h;
  const double zmax = reach_right_ + 3.0 * h;
  rows_ = static_cast<std::size_t>(std::ceil((zmax - zmin_) / h)) + 2;
  const double cap = level + 1e3;
  std::vector<double> table(rows_ * kPhases + 1);
  for (std::size_t k = 0; k < table.size(); ++k) {
    const double v = w_(zmin_ + static_cast<double>(k) * ht_);
    table[k] = std::isfinite(v) ? std::min(v, cap) : cap;
  }
  double kappa = 0.0;
  for (std::size_t k = 1; k + 1 < table.size(); ++k) {
    const double z = zmin_ + static_cast<double>(k) * ht_;
    if (z < -reach_left_ - h || z > reach_right_ + h) continue;
    kappa = std::max(kappa, (table[k - 1] - 2.0 * table[k] + table[k + 1]) / (ht_ * ht_));
  }
  kappa = 2.0 * kappa + 1e-12;
  band_ = kappa * h * h / 8.0 + 2.0 * kappa * ht_ * ht_ / 8.0;

  phase_rev_.assign(kPhases + 1, std::vector<double>(rows_));
  for (std::size_t p = 0; p <= kPhases; ++p) {
    for (std::size_t m = 0; m < rows_; ++m) {
      const std::size_t k = p + m * kPhases;
      phase_rev_[p][rows_ - 1 - m] = k < table.size() ? table[k] : cap;
    }
  }
  scratch_.resize(n);
  picks_.resize(n);
}

double InfConvEvaluator::minimiser_for_slope(double s) const {
  const double bound = std::max(reach_left_, reach_right_) + (f_.hi() - f_.lo()) + 1.0;
  if (w_.slope(bound) <= s) return bound;
  if (w_.slope(-bound) >= s) return -bound;
  double a = -bound;
  double b = bound;
  for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    (w_.slope(m) < s ? a : b) = m;
  }
  return 0.5 * (a + b);
}

double InfConvEvaluator::cell_value(std::size_t i, double x) const {
  const double yi = f_.x(i);
  const double c = std::clamp(zstar_[i], x - f_.x(i + 1), x - yi);
  return f_[i] + slope_[i] * ((x - c) - yi) + w_(c);
}

double InfConvEvaluator::operator()(double x) const {
  const double lo = f_.lo();
  const double h = f_.step();
  const std::size_t n = f_.size();

  // Flat continuation of f past either end of its grid.
  double best = std::min(w_(std::max(zstar0_, x - lo)) + f_[0],
                         w_(std::min(zstar0_, x - f_.hi())) + f_[n - 1]);

  const double jlo_real = std::ceil((x - reach_right_ - h - lo) / h);
  const double jhi_real = std::floor((x + reach_left_ + h - lo) / h);
  if (jhi_real < 0.0 || jlo_real > static_cast<double>(n - 1) || jlo_real > jhi_real) return best;
  const auto jlo = static_cast<std::size_t>(std::max(0.0, jlo_real));
  const auto jhi = static_cast<std::size_t>(std::min(static_cast<double>(n - 1), jhi_real));
  if (jlo == jhi) return std::min(best, w_(x - f_.x(jlo)) + f_[jlo]);

  const double q = (x - lo - zmin_) / ht_;
  const double k0f = std::floor(q);
  const double theta = q - k0f;
  const auto k0 = static_cast<std::size_t>(k0f);
  const std::size_t rho = k0 % kPhases;
  const std::size_t m0 = k0 / kPhases;
  const std::size_t base = rows_ - 1 - m0 + jlo;
  const std::size_t count = jhi - jlo + 1;

  const double approx_min = simd::kernels().blend_add_min(
      phase_rev_[rho].data() + base, phase_rev_[rho + 1].data() + base, theta,
      f_.values().data() + jlo, scratch_.data(), count);
  const double threshold = approx_min + band_ + 1e-12 * (1.0 + std::abs(approx_min));

  // Cells touching a node whose approximate value is within the band.
  const std::size_t picked =
      simd::kernels().select_below(scratch_.data(), count, threshold, picks_.data());
  std::size_t next_cell = 0;
  for (std::size_t k = 0; k < picked; ++k) {
    const std::size_t node = picks_[k];
    for (std::size_t c = node == 0 ? 0 : node - 1; c <= node && c + 1 < count; ++c) {
      if (c < next_cell) continue;
      best = std::min(best, cell_value(jlo + c, x));
      next_cell = c + 1;
    }
  }
  return best;
}

TauReport tau_functional(const Measure1D& mu, const CostFunction& w, const GridFunction& f,
                         const TauOptions& opt) {
  const InfConvEvaluator box(w, f);
  const double inf_f = box.inf_f();
  const double sup_f = box.sup_f();
  const double depth = (sup_f - inf_f) + 40.0;
  const Interval& s = mu.support();

  // Range outside which the mass times e^{osc f} is negligible.
  double b = std::max(mu.center(), 0.0) + 1.0;
  for (double step = 1.0; b < s.hi && mu.log_sf(b) > -depth; step *= 2.0) b += step;
  b = std::min(b, s.hi);
  double a = std::min(mu.center(), 0.0) - 1.0;
  for (double step = 1.0; a > s.lo && mu.log_cdf(a) > -depth; step *= 2.0) a -= step;
  a = std::max(a, s.lo);

  // int e^{-(f - inf f)} dmu: Gauss-Legendre on every grid cell, exact tails.
  quad::CompensatedSum right;
  right.add(std::exp(-(f[0] - inf_f)) * mu.cdf(f.lo()));
  right.add(std::exp(-(f[f.size() - 1] - inf_f)) * mu.sf(f.hi()));
  auto right_integrand = [&](double x) {
    return std::exp(-(f(x) - inf_f) + mu.log_density(x));
  };
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    double c0 = std::max(f.x(i), a);
    double c1 = std::min(f.x(i + 1), b);
    if (!(c0 < c1)) continue;
    const double mid = mu.center();
    if (mid > c0 && mid < c1) {
      right.add(boost::math::quadrature::gauss<double, 7>::integrate(right_integrand, c0, mid));
      c0 = mid;
    }
    right.add(boost::math::quadrature::gauss<double, 7>::integrate(right_integrand, c0, c1));
  }

  // int e^{(W box f) - sup f} dmu; W box f is constant past the reach.
  quad::CompensatedSum left;
  const double sat_lo = f.lo() - box.reach_left();
  const double sat_hi = f.hi() + box.reach_right();
  if (sat_lo > a) left.add(std::exp(f[0] - sup_f) * mu.cdf(sat_lo));
  if (sat_hi < b) left.add(std::exp(f[f.size() - 1] - sup_f) * mu.sf(sat_hi));
  const double ma = std::max(a, sat_lo);
  const double mb = std::min(b, sat_hi);
  if (ma < mb) {
    std::vector<double> cuts{ma, mb};
    const auto panels = static_cast<std::size_t>(std::ceil(mb - ma));
    for (std::size_t k = 1; k < panels; ++k) {
      cuts.push_back(ma + (mb - ma) * static_cast<double>(k) / static_cast<double>(panels));
    }
    for (double kink : {mu.center(), f.lo(), f.hi()}) {
      if (kink > ma && kink < mb) cuts.push_back(kink);
    }
    std::sort(cuts.begin(), cuts.end());
    auto left_integrand = [&](double x) { return std::exp(box(x) - sup_f + mu.log_density(x)); };
    left.add(quad::gauss_kronrod_global(left_integrand, cuts, opt.rel_tol));
  }

  TauReport rep;
  const double log_left = sup_f + std::log(left.value());
  const double log_right = -inf_f + std::log(right.value());
  rep.integral_left = std::exp(log_left);
  rep.integral_right = std::exp(log_right);
  rep.product = std::exp(log_left + log_right);
  if (!std::isfinite(rep.product)) throw DivergenceError("tau: integrals are not finite");
  rep.pass = rep.product <= 1.0 + opt.pass_slack;
  rep.verdict = rep.pass ? Verdict::pass
                         : (rep.product > 1.0 + opt.fail_margin ? Verdict::fail : Verdict::inconclusive);
  return rep;
}

std::vector<FamilyMember> default_family(const CostFunction& w, const FamilySpec& spec) {
  spec.grid.validate();
  std::vector<FamilyMember> out;
  out.reserve(200);
  static constexpr double kClip = 10.0;
  for (int k = 1; k <= 30; ++k) {
    for (double sign : {1.0, -1.0}) {
      const double c = sign * 0.05 * k;
      out.push_back({"linear(c=" + fmt(c) + ")", GridFunction::sample([c](double x) {
                       return std::clamp(c * x, -kClip, kClip);
                     }, spec.grid)});
    }
  }
  for (double a : {0.05, 0.1, 0.25, 0.5, 1.0}) {
    for (double sign : {1.0, -1.0}) {
      for (double centre : {-1.0, 0.0, 0.5, 2.0}) {
        const double coef = sign * a;
        out.push_back({"quadratic(a=" + fmt(coef) + ",c=" + fmt(centre) + ")",
                       GridFunction::sample([coef, centre](double x) {
                         return std::clamp(coef * (x - centre) * (x - centre), -kClip, kClip);
                       }, spec.grid)});
      }
    }
  }
  std::mt19937_64 rng(spec.seed);
  for (int r = 0; r < 90; ++r) {
    std::vector<double> knots(12);
    std::vector<double> vals(12);
    for (auto& k : knots) k = -20.0 + 40.0 * portable_uniform(rng);
    for (auto& v : vals) v = -4.0 + 8.0 * portable_uniform(rng);
    std::sort(knots.begin(), knots.end());
    auto pl = [&](double x) {
      if (x <= knots.front()) return vals.front();
      if (x >= knots.back()) return vals.back();
      const auto it = std::upper_bound(knots.begin(), knots.end(), x);
      const auto i = static_cast<std::size_t>(it - knots.begin()) - 1;
      const double t = (x - knots[i]) / (knots[i + 1] - knots[i]);
      return vals[i] + t * (vals[i + 1] - vals[i]);
    };
    out.push_back({"random_pl(" + std::to_string(r) + ")", GridFunction::sample(pl, spec.grid)});
  }
  for (double level : {0.5, 1.0, 2.0, 5.0, 10.0, 15.0, 20.0, 30.0, 40.0, 50.0}) {
    out.push_back({"cost_clipped(" + fmt(level) + ")", GridFunction::sample([&w, level](double x) {
                     return std::min(w(x), level);
                   }, spec.grid)});
  }
  return out;
}

std::vector<FamilyMember> family_from_file(const std::string& path) {
  namespace fs = std::filesystem;
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
    return {{fs::path(path).filename().string(), GridFunction::read_csv_file(path)}};
  }
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open family list '" + path + "'");
  const fs::path dir = fs::path(path).parent_path();
  std::vector<FamilyMember> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    fs::path p(line);
    if (p.is_relative()) p = dir / p;
    out.push_back({line, GridFunction::read_csv_file(p.string())});
  }
  if (out.empty()) throw InvalidInput("family list '" + path + "' is empty");
  return out;
}

SuiteResult ic_suite(const Measure1D& mu, double beta, const std::vector<FamilyMember>& family,
                     const TauOptions& opt) {
  if (family.empty()) throw InvalidParameter("ic_suite: empty family");
  const CostFunction w = ic_cost(mu, beta);
  SuiteResult res;
  res.measure = mu.name();
  res.beta = beta;
  res.max_product = -kInf;
  for (const auto& member : family) {
    TauReport r = tau_functional(mu, w, member.f, opt);
    r.member = member.label;
    if (r.product > res.max_product) {
      res.max_product = r.product;
      res.worst_member = r.member;
    }
    switch (r.verdict) {
      case Verdict::pass:
        ++res.passed;
        break;
      case Verdict::fail:
        ++res.failed;
        break;
      case Verdict::inconclusive:
        ++res.inconclusive;
        break;
    }
    res.reports.push_back(std::move(r));
  }
  return res;
}

SuiteResult ic_suite(const Measure1D& mu, double beta, const FamilySpec& spec,
                     const TauOptions& opt) {
  return ic_suite(mu, beta, default_family(ic_cost(mu, beta), spec), opt);
}

Lemma52Result lemma52_integrals(const Measure1D& mu) {
  const CostFunction w = ic_cost(mu, 1.0);
  const Interval& s = mu.support();
  Lemma52Result r{};
  try {
    r.left = quad::integrate_line(
        [&](double x) {
          const double ld = mu.log_density(x);
          return std::isfinite(ld) ? std::exp(2.0 * w(0.5 * x) + ld) : 0.0;
        },
        s.lo, s.hi, mu.center());
  } catch (const DivergenceError& e) {
    throw DivergenceError(std::string("left integral of e^{2 W(x/2)} for '") + mu.name() +
                          "' diverges: " + e.what());
  }
  r.right = quad::integrate_line(
      [&](double x) {
        const double ld = mu.log_density(x);
        return std::isfinite(ld) ? std::exp(-w(x) + ld) : 0.0;
      },
      s.lo, s.hi, mu.center());
  r.value = r.left * r.right;
  return r;
}

double lemma52_test(const Measure1D& mu) { return lemma52_integrals(mu).value; }

CounterexampleIntegrals counterexample_integrals() {
  // f(y) - y for f the symmetric-exponential Cramer transform, without cancellation.
  auto f_minus_y = [](double y) {
    const double r = std::sqrt(y * y + 1.0);
    return 1.0 / (r + y) - 1.0 - std::log(0.5 * (r + 1.0));
  };
  auto half_line = [](auto&& g) {
    const quad::TailResult t = quad::integrate_tail(g, 0.0, kInf);
    if (!t.converged) throw DivergenceError("counterexample integral did not converge");
    return t.value;
  };
  CounterexampleIntegrals c{};
  c.i1 = half_line([&](double y) { return std::exp(2.0 * f_minus_y(y)); });
  c.i2 = half_line([](double y) { return std::exp(-(exp_sym_cramer(y) + y)); });
  c.i3 = half_line([&](double y) { return std::exp(4.0 * f_minus_y(y)); });
  c.i4 = half_line([](double y) { return std::exp(-2.0 * (exp_sym_cramer(y) + y)); });
  c.p1 = 2.0 * c.i1 * c.i2;
  c.p2 = 8.0 * c.i3 * c.i4;
  return c;
}

Lemma51Report lemma51_conditions(const CostFunction& w, double x_max, std::size_t n) {
  if (!(x_max > 0.0)) throw InvalidParameter("lemma51: x_max must be positive");
  if (n < 2) throw InvalidParameter("lemma51: need at least 2 grid points");
  Lemma51Report rep;
  rep.x_max = x_max;
  rep.n = n;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = x_max * static_cast<double>(i) / static_cast<double>(n - 1);
    const double d = std::abs(w.slope(x));
    const double slope_margin = 1.0 - 2.0 * d;
    if (slope_margin < rep.worst_slope_margin) {
      rep.worst_slope_margin = slope_margin;
      rep.worst_slope_x = x;
    }
    const double q = (1.0 - 2.0 * d) * (1.0 + 2.0 * d);  // 1 - 4 W'^2
    const double wx = w(x);
    double value;
    if (q > 0.0) {
      value = std::expm1(wx + std::log(q)) ;
    } else if (q == 0.0) {
      value = -1.0;
    } else {
      value = -std::exp(wx + std::log(-q)) - 1.0;
    }
    if (value < rep.worst_exponential_margin) {
      rep.worst_exponential_margin = value;
      rep.worst_exponential_x = x;
    }
  }
  rep.slope_ok = rep.worst_slope_margin >= -1e-12;
  rep.exponential_ok = rep.worst_exponential_margin >= -1e-10;
  return rep;
}

}  // namespace tauforge
