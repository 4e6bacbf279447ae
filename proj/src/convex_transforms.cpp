#include "tauforge/convex_transforms.hpp"

#include <algorithm>
#include <cmath>

#include "tauforge/infimum_convolution.hpp"
#include "tauforge/quadrature.hpp"
#include "tauforge/simd/kernels.hpp"

namespace tauforge {

namespace {

struct FiniteBlock {
  std::size_t first;
  std::size_t last;
};

FiniteBlock finite_block(const GridFunction& f) {
  std::size_t first = 0;
  while (!std::isfinite(f[first])) ++first;
  std::size_t last = f.size() - 1;
  while (!std::isfinite(f[last])) --last;
  return {first, last};
}

std::vector<double> nodes_of(const GridFunction& f) {
  std::vector<double> y(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) y[i] = f.x(i);
  return y;
}

void check_slopes(double slope_lo, double slope_hi, std::size_t m) {
  if (!(slope_lo < slope_hi) || !std::isfinite(slope_lo) || !std::isfinite(slope_hi)) {
    throw InvalidParameter("legendre: need finite slope_lo < slope_hi");
  }
  if (m < 2) throw InvalidParameter("legendre: need at least 2 slopes");
}

}  // namespace

SlopeRange default_slope_range(const GridFunction& f) {
  const auto [first, last] = finite_block(f);
  if (first == last) return {-1.0, 1.0};
  double lo = kInf;
  double hi = -kInf;
  for (std::size_t i = first; i < last; ++i) {
    if (!std::isfinite(f[i]) || !std::isfinite(f[i + 1])) continue;
    const double d = (f[i + 1] - f[i]) / f.step();
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  if (!(lo < hi)) return {lo - 1.0, hi + 1.0};
  return {lo, hi};
}

LegendreSamples legendre_scan(const GridFunction& f, double slope_lo, double slope_hi,
                              std::size_t m) {
  check_slopes(slope_lo, slope_hi, m);
  const GridSpec slopes{slope_lo, slope_hi, m};
  const std::vector<double> y = nodes_of(f);
  const auto& kern = simd::kernels();
  LegendreSamples out;
  out.values.resize(m);
  out.argmax.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const simd::ArgMax a = kern.max_affine(y.data(), f.values().data(), slopes.at(k), f.size());
    out.values[k] = a.value;
    out.argmax[k] = a.index;
  }
  return out;
}

LegendreSamples legendre_sweep(const GridFunction& f, double slope_lo, double slope_hi,
                               std::size_t m) {
  check_slopes(slope_lo, slope_hi, m);
  if (!f.is_convex()) throw InvalidInput("legendre_sweep: input is not convex");
  const GridSpec slopes{slope_lo, slope_hi, m};
  const std::vector<double> y = nodes_of(f);
  const std::vector<double>& v = f.values();
  const auto [first, last] = finite_block(f);

  double ymax = 0.0;
  double fmax = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    ymax = std::max(ymax, std::abs(y[i]));
    fmax = std::max(fmax, std::abs(v[i]));
  }

  LegendreSamples out;
  out.values.resize(m);
  out.argmax.resize(m);
  std::size_t j = first;
  for (std::size_t k = 0; k < m; ++k) {
    const double s = slopes.at(k);
    auto c = [&](std::size_t i) { return s * y[i] - v[i]; };
    // Computed values are concave in i only up to rounding; a window of width
    // `band` around the climb end catches ties and rounding plateaus.
    const double band = 4e-16 * (std::abs(s) * ymax + fmax) + 1e-300;
    while (j < last && c(j + 1) > c(j)) ++j;
    std::size_t best = j;
    double bv = c(j);
    for (std::size_t i = j + 1; i <= last; ++i) {
      const double ci = c(i);
      if (ci < bv - band) break;
      if (ci > bv) {
        bv = ci;
        best = i;
      }
    }
    for (std::size_t i = j; i-- > first;) {
      const double ci = c(i);
      if (ci < bv - band) break;
      if (ci >= bv) {
        bv = ci;
        best = i;
      }
    }
    out.values[k] = bv;
    out.argmax[k] = best;
    j = best;
  }
  return out;
}

GridFunction legendre(const GridFunction& f, double slope_lo, double slope_hi, std::size_t m) {
  LegendreSamples s = f.is_convex() ? legendre_sweep(f, slope_lo, slope_hi, m)
                                    : legendre_scan(f, slope_lo, slope_hi, m);
  return GridFunction(slope_lo, slope_hi, std::move(s.values));
}

GridFunction legendre(const GridFunction& f, std::size_t m) {
  const SlopeRange r = default_slope_range(f);
  return legendre(f, r.lo, r.hi, m);
}

GridFunction biconjugate(const GridFunction& f) {
  const SlopeRange r = default_slope_range(f);
  const GridFunction g = legendre(f, r.lo, r.hi, f.size());
  return legendre(g, f.lo(), f.hi(), f.size());
}

double laplace(const Measure1D& mu, double t) { return std::exp(log_mgf_numeric(mu, t)); }

LambdaDomain find_lambda_domain(const std::function<double(double)>& log_mgf, double cap) {
  auto side = [&](double sign) {
    auto finite_at = [&](double t) { return std::isfinite(log_mgf(sign * t)); };
    double good = 0.0;
    double bad = kInf;
    if (finite_at(1.0)) {
      good = 1.0;
      while (2.0 * good <= cap) {
        if (finite_at(2.0 * good)) {
          good *= 2.0;
        } else {
          bad = 2.0 * good;
          break;
        }
      }
      if (!std::isfinite(bad) && good < cap && finite_at(cap)) good = cap;
    } else {
      bad = 1.0;
      for (int k = 1; k <= 40; ++k) {
        const double t = std::ldexp(1.0, -k);
        if (finite_at(t)) {
          good = t;
          break;
        }
        bad = t;
      }
      if (good == 0.0) return 0.0;
    }
    if (std::isfinite(bad)) {
      for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (good + bad);
        (finite_at(mid) ? good : bad) = mid;
      }
    }
    return sign * good;
  };
  return {side(-1.0), side(1.0)};
}

double cramer_from_log_mgf(const std::function<double(double)>& log_mgf, double x,
                           const LambdaDomain& domain) {
  auto phi = [&](double t) {
    const double l = log_mgf(t);
    return std::isfinite(l) ? x * t - l : -kInf;
  };
  const quad::Peak peak = quad::concave_peak(phi, domain.lo, domain.hi, 0.0, 1e-12);
  if (peak.divergent || !std::isfinite(peak.value)) return kInf;
  // A maximiser pinned to an open (never blowing up) end means the sup is not attained.
  const double cap_hit = 1e6 * (1.0 - 1e-12);
  if ((peak.arg >= cap_hit && domain.hi >= cap_hit) ||
      (peak.arg <= -cap_hit && domain.lo <= -cap_hit)) {
    return kInf;
  }
  double best = std::max(peak.value, 0.0);  // t = 0 gives x*0 - Lambda(0) = 0

  // Polish on the derivative when the maximiser is interior.
  const double w = 1e-3 * std::max(1.0, std::abs(peak.arg));
  const double a = std::max(domain.lo, peak.arg - w);
  const double b = std::min(domain.hi, peak.arg + w);
  auto slope_gap = [&](double t) {
    const double d = 1e-6 * std::max(1.0, std::abs(t));
    if (t - d < domain.lo || t + d > domain.hi) return 0.0;
    return x - (log_mgf(t + d) - log_mgf(t - d)) / (2.0 * d);
  };
  if (a < b) {
    const double ga = slope_gap(a);
    const double gb = slope_gap(b);
    if (ga > 0.0 && gb < 0.0) {
      const double t = quad::bisect(slope_gap, a, b, 1e-14);
      best = std::max(best, phi(t));
    }
  }
  return best;
}

double cramer_numeric(const Measure1D& mu, double x) {
  auto lam = [&mu](double t) { return log_mgf(mu, t); };
  const LambdaDomain dom = find_lambda_domain(lam);
  if (dom.lo == 0.0 && dom.hi == 0.0) {
    throw UnsupportedMeasure("cramer: log-Laplace transform of '" + mu.name() +
                             "' is infinite off 0");
  }
  return cramer_from_log_mgf(lam, x, dom);
}

double cramer_numeric(const SymmetrizedMeasure& mu, double x) {
  auto lam = [&mu](double t) { return mu.log_mgf(t); };
  const LambdaDomain dom = find_lambda_domain(lam);
  if (dom.lo == 0.0 && dom.hi == 0.0) {
    throw UnsupportedMeasure("cramer: symmetrized transform of '" + mu.base().name() +
                             "' is infinite off 0");
  }
  return cramer_from_log_mgf(lam, x, dom);
}

EvenCramerTable::EvenCramerTable(const LogMgfWithSlope& lambda, double support_edge,
                                 double x_cover)
    : support_edge_(support_edge) {
  auto finite_at = [&](double t) { return std::isfinite(lambda(t).first); };
  constexpr double kCap = 1e4;
  double good = 0.0;
  double bad = kInf;
  if (!finite_at(1.0)) {
    bad = 1.0;
    for (int k = 1; k <= 40 && good == 0.0; ++k) {
      const double t = std::ldexp(1.0, -k);
      if (finite_at(t)) good = t;
      else bad = t;
    }
    if (good == 0.0) throw UnsupportedMeasure("cramer table: transform infinite off 0");
  } else {
    good = 1.0;
    while (2.0 * good <= kCap) {
      if (!finite_at(2.0 * good)) {
        bad = 2.0 * good;
        break;
      }
      good *= 2.0;
    }
  }
  // Shrink towards the domain edge only while the slope there is still below x_cover;
  // evaluations very close to the edge are expensive.
  if (std::isfinite(bad)) {
    for (int it = 0; it < 60 && lambda(good).second < x_cover; ++it) {
      const double mid = 0.5 * (good + bad);
      if (!(mid > good && mid < bad) || bad - good <= 1e-10 * good) break;
      (finite_at(mid) ? good : bad) = mid;
    }
  }
  double t_max = good;
  if (lambda(good).second > x_cover) {
    t_max = quad::bisect([&](double t) { return lambda(t).second - x_cover; }, 0.0, good, 1e-12);
  }

  std::vector<double> ts;
  constexpr std::size_t kStart = 256;
  for (std::size_t k = 0; k <= kStart; ++k) ts.push_back(t_max * static_cast<double>(k) / kStart);
  std::vector<std::pair<double, double>> lam;
  lam.reserve(ts.size());
  for (double t : ts) lam.push_back(t == 0.0 ? std::pair{0.0, 0.0} : lambda(t));

  for (int pass = 0; pass < 6; ++pass) {
    std::vector<double> nts;
    std::vector<std::pair<double, double>> nlam;
    bool inserted = false;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      nts.push_back(ts[i]);
      nlam.push_back(lam[i]);
      if (i + 1 == ts.size()) break;
      const double gap = lam[i + 1].second - lam[i].second;
      if (gap > 0.02 * std::max(1.0, lam[i].second) && ts.size() + nts.size() < 16384) {
        const double mid = 0.5 * (ts[i] + ts[i + 1]);
        nts.push_back(mid);
        nlam.push_back(lambda(mid));
        inserted = true;
      }
    }
    ts = std::move(nts);
    lam = std::move(nlam);
    if (!inserted) break;
  }

  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double x = lam[i].second;
    if (!std::isfinite(x) || !std::isfinite(lam[i].first)) continue;
    if (!xs_.empty() && !(x > xs_.back())) continue;
    xs_.push_back(x);
    ts_.push_back(ts[i]);
    values_.push_back(ts[i] == 0.0 ? 0.0 : std::max(0.0, ts[i] * x - lam[i].first));
  }
  if (xs_.size() < 2) throw UnsupportedMeasure("cramer table: could not tabulate the transform");
}

double EvenCramerTable::operator()(double x) const {
  const double u = std::abs(x);
  if (u > xs_.back()) {
    if (u >= support_edge_) return kInf;
    return values_.back() + ts_.back() * (u - xs_.back());
  }
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), u);
  const std::size_t i = it == xs_.begin() ? 0 : std::min<std::size_t>(it - xs_.begin() - 1, xs_.size() - 2);
  const double d = xs_[i + 1] - xs_[i];
  const double s = (u - xs_[i]) / d;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * values_[i] + h10 * d * ts_[i] + h01 * values_[i + 1] + h11 * d * ts_[i + 1];
}

double EvenCramerTable::derivative(double x) const {
  const double u = std::abs(x);
  const double sign = x < 0 ? -1.0 : 1.0;
  if (u > xs_.back()) return u >= support_edge_ ? sign * kInf : sign * ts_.back();
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), u);
  const std::size_t i = it == xs_.begin() ? 0 : std::min<std::size_t>(it - xs_.begin() - 1, xs_.size() - 2);
  const double s = (u - xs_[i]) / (xs_[i + 1] - xs_[i]);
  return sign * (ts_[i] + s * (ts_[i + 1] - ts_[i]));
}

IdentityReport conjugate_sum_identity(const GridFunction& f, const GridFunction& g,
                                      std::size_t m) {
  if (!f.is_convex() || !g.is_convex()) {
    throw InvalidInput("conjugate_sum_identity: both inputs must be convex");
  }
  auto range = [](const GridFunction& h) {
    const auto [first, last] = finite_block(h);
    if (first == last) return SlopeRange{-kInf, kInf};
    return default_slope_range(h);
  };
  const SlopeRange rf = range(f);
  const SlopeRange rg = range(g);
  SlopeRange r{std::max(rf.lo, rg.lo), std::min(rf.hi, rg.hi)};
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi)) r = {-1.0, 1.0};
  if (!(r.lo < r.hi)) throw InvalidInput("conjugate_sum_identity: slope ranges do not overlap");

  const GridFunction h = infconv(f, g);
  const GridFunction lhs = legendre(h, r.lo, r.hi, m);
  const GridFunction cf = legendre(f, r.lo, r.hi, m);
  const GridFunction cg = legendre(g, r.lo, r.hi, m);
  IdentityReport rep{0.0, r.lo, r, m};
  for (std::size_t k = 0; k < m; ++k) {
    const double d = std::abs(lhs[k] - (cf[k] + cg[k]));
    if (d > rep.discrepancy) {
      rep.discrepancy = d;
      rep.worst_slope = lhs.x(k);
    }
  }
  return rep;
}

}  // namespace tauforge
