#include "tauforge/measures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

namespace tauforge {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kNegInf = -kInf;

double log_or_neg_inf(double v) { return v > 0.0 ? std::log(v) : kNegInf; }

// log of the standard normal upper tail, accurate far into the tail.
double std_normal_log_sf(double z) {
  if (z < 35.0) return std::log(0.5 * std::erfc(z / std::numbers::sqrt2));
  const double z2 = z * z;
  const double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2) +
                        105.0 / (z2 * z2 * z2 * z2);
  return -0.5 * z2 - std::log(z) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

double bisect_quantile(const Measure1D& mu, double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("quantile: p must lie in (0, 1)");
  const Interval& s = mu.support();
  // Upper-tail probabilities are matched through sf to keep precision near 1.
  const bool upper = p > 0.5;
  auto residual = [&](double x) { return upper ? (1.0 - p) - mu.sf(x) : mu.cdf(x) - p; };
  double lo = std::clamp(mu.center() - 1.0, s.lo, s.hi);
  double hi = std::clamp(mu.center() + 1.0, s.lo, s.hi);
  for (double step = 1.0; residual(lo) > 0.0 && lo > s.lo; step *= 2.0) {
    lo = std::max(s.lo, lo - step);
  }
  for (double step = 1.0; residual(hi) < 0.0 && hi < s.hi; step *= 2.0) {
    hi = std::min(s.hi, hi + step);
  }
  return quad::bisect(residual, lo, hi, 1e-12);
}

// Tabulated cumulative mass of exp(-(W - W(0))) for an even convex potential W.
class PotentialTable {
 public:
  explicit PotentialTable(const Potential& pot) : w_(pot.value) {
    w0_ = w_(0.0);
    if (!std::isfinite(w0_)) {
      throw InvalidParameter("potential '" + pot.label + "' is not finite at 0");
    }
    edge_ = find_domain_edge();
    reach_ = find_mass_reach(pot.label);
    check_shape(pot.label);
    build();
  }

  double edge() const { return edge_; }
  double log_z() const { return std::log(z_); }

  double log_density(double x) const {
    if (std::abs(x) > edge_) return kNegInf;
    const double w = w_(x);
    return std::isfinite(w) ? -(w - w0_) - std::log(z_) : kNegInf;
  }

  double cdf(double x) const {
    if (x >= 0.0) return 1.0 - sf(x);
    return sf(-x);
  }

  double sf(double x) const {
    if (x >= edge_) return 0.0;
    if (x <= -edge_) return 1.0;
    if (x < -reach_) return 1.0 - tail_mass_above(-x) / z_;
    if (x > reach_) return tail_mass_above(x) / z_;
    const auto k = cell_of(x);
    return (upper_[k + 1] + partial(x, node(k + 1))) / z_;
  }

  double lower_cdf(double x) const {
    if (x <= -edge_) return 0.0;
    if (x >= edge_) return 1.0;
    if (x < -reach_) return tail_mass_above(-x) / z_;
    if (x > reach_) return 1.0 - tail_mass_above(x) / z_;
    const auto k = cell_of(x);
    return (lower_[k] + partial(node(k), x)) / z_;
  }

  double log_sf(double x) const {
    if (x >= edge_) return kNegInf;
    if (x > reach_) {
      const double wx = w_(x);
      auto shifted = [&](double s) {
        const double w = w_(s);
        return std::isfinite(w) ? std::exp(-(w - wx)) : 0.0;
      };
      const double rest = quad::integrate_line(shifted, x, edge_, x);
      return -(wx - w0_) - std::log(z_) + std::log(rest);
    }
    return log_or_neg_inf(sf(x));
  }

 private:
  static constexpr int kCells = 4096;
  static constexpr double kMassDepth = 80.0;

  double raw(double x) const {
    const double w = w_(x);
    return std::isfinite(w) ? std::exp(-(w - w0_)) : 0.0;
  }

  double node(std::size_t k) const { return -reach_ + static_cast<double>(k) * dz_; }

  std::size_t cell_of(double x) const {
    const double pos = (x + reach_) / dz_;
    const auto k = static_cast<long>(std::floor(pos));
    return static_cast<std::size_t>(std::clamp<long>(k, 0, kCells - 1));
  }

  double partial(double a, double b) const {
    quad::SimpsonOptions opt;
    opt.abs_tol = 1e-18;
    opt.rel_tol = 1e-14;
    opt.panels = 2;
    return quad::adaptive_simpson([this](double s) { return raw(s); }, a, b, opt);
  }

  double tail_mass_above(double x) const {
    return quad::integrate_line([this](double s) { return raw(s); }, x, edge_, x);
  }

  double find_domain_edge() const {
    double finite = 0.0;
    for (int k = -20; k <= 40; ++k) {
      const double x = std::ldexp(1.0, k);
      if (!std::isfinite(w_(x))) {
        double a = finite;
        double b = x;
        for (int it = 0; it < 200; ++it) {
          const double m = 0.5 * (a + b);
          if (m <= a || m >= b) break;
          (std::isfinite(w_(m)) ? a : b) = m;
        }
        return a;
      }
      finite = x;
    }
    return kInf;
  }

  double find_mass_reach(const std::string& label) const {
    for (int k = -20; k <= 40; ++k) {
      const double x = std::ldexp(1.0, k);
      if (x >= edge_) return edge_;
      if (w_(x) - w0_ > kMassDepth) {
        return quad::bisect([&](double s) { return (w_(s) - w0_) - kMassDepth; }, 0.5 * x, x,
                            1e-9 * x);
      }
    }
    throw DivergenceError("potential '" + label + "' is not integrable: exp(-W) keeps its mass");
  }

  void check_shape(const std::string& label) const {
    constexpr int kGrid = 1024;
    std::vector<double> xs(kGrid);
    std::vector<double> ws(kGrid);
    for (int i = 0; i < kGrid; ++i) {
      xs[i] = -reach_ + 2.0 * reach_ * i / (kGrid - 1);
      ws[i] = w_(xs[i]);
    }
    for (int i = 0; i < kGrid; ++i) {
      const double mirror = w_(-xs[i]);
      if (std::abs(mirror - ws[i]) > 1e-12 * (1.0 + std::abs(ws[i]))) {
        throw InvalidParameter("potential '" + label + "' is not even");
      }
    }
    for (int i = 1; i + 1 < kGrid; ++i) {
      const double chord = 0.5 * (ws[i - 1] + ws[i + 1]);
      if (ws[i] > chord + 1e-9 * (1.0 + std::abs(ws[i]))) {
        throw InvalidParameter("potential '" + label + "' fails the midpoint convexity test");
      }
    }
  }

  void build() {
    dz_ = 2.0 * reach_ / kCells;
    std::vector<double> cells(kCells);
    for (int k = 0; k < kCells; ++k) {
      const double a = node(k);
      const double b = (k + 1 == kCells) ? reach_ : node(k + 1);
      quad::SimpsonOptions opt;
      opt.abs_tol = 1e-20;
      opt.rel_tol = 1e-14;
      opt.panels = 2;
      cells[k] = quad::adaptive_simpson([this](double s) { return raw(s); }, a, b, opt);
    }
    lower_.assign(kCells + 1, 0.0);
    upper_.assign(kCells + 1, 0.0);
    for (int k = 0; k < kCells; ++k) lower_[k + 1] = lower_[k] + cells[k];
    for (int k = kCells - 1; k >= 0; --k) upper_[k] = upper_[k + 1] + cells[k];
    z_ = lower_[kCells];
  }

  RealFn w_;
  double w0_ = 0.0;
  double edge_ = kInf;
  double reach_ = 0.0;
  double dz_ = 0.0;
  double z_ = 1.0;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

double parse_double(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw InvalidParameter("cannot parse " + std::string(what) + " from '" + std::string(text) +
                           "'");
  }
  return value;
}

}  // namespace

double exp_sym_cramer(double x) {
  const double r = std::sqrt(x * x + 1.0);
  const double rm1 = x * x / (r + 1.0);  // r - 1 without cancellation
  return rm1 - std::log1p(0.5 * rm1);
}

double exp_sym_cramer_derivative(double x) { return x / (std::sqrt(x * x + 1.0) + 1.0); }

Measure1D::Measure1D(Parts parts) : p_(std::move(parts)) {
  if (!p_.log_density || !p_.cdf || !p_.sf || !p_.log_cdf || !p_.log_sf) {
    throw InvalidParameter("measure '" + p_.name + "' is missing density or distribution functions");
  }
  if (!(p_.support.lo < p_.support.hi)) {
    throw InvalidParameter("measure '" + p_.name + "' needs an interval support (no atoms)");
  }
  second_moment_ = expect([](double x) { return x * x; });
}

double Measure1D::quantile(double p) const {
  if (p_.quantile) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("quantile: p must lie in (0, 1)");
    return p_.quantile(p);
  }
  return bisect_quantile(*this, p);
}

double Measure1D::total_mass() const {
  return expect([](double) { return 1.0; });
}

Measure1D make_gaussian(double mean, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw InvalidParameter("gaussian: variance must be positive");
  }
  const double sigma = std::sqrt(variance);
  const double log_norm = std::log(sigma) + 0.5 * std::log(2.0 * std::numbers::pi);
  Measure1D::Parts p;
  p.name = (mean == 0.0 && variance == 1.0) ? "gaussian" : "gaussian(" + std::to_string(mean) +
                                                                 "," + std::to_string(variance) +
                                                                 ")";
  p.log_density = [=](double x) {
    const double z = (x - mean) / sigma;
    return -0.5 * z * z - log_norm;
  };
  p.sf = [=](double x) { return 0.5 * std::erfc((x - mean) / (sigma * std::numbers::sqrt2)); };
  p.cdf = [=](double x) { return 0.5 * std::erfc(-(x - mean) / (sigma * std::numbers::sqrt2)); };
  p.log_sf = [=](double x) { return std_normal_log_sf((x - mean) / sigma); };
  p.log_cdf = [=](double x) { return std_normal_log_sf(-(x - mean) / sigma); };
  p.symmetric = mean == 0.0;
  p.center = mean;
  p.log_mgf = [=](double t) { return mean * t + 0.5 * variance * t * t; };
  p.cramer = [=](double x) { return (x - mean) * (x - mean) / (2.0 * variance); };
  p.cramer_derivative = [=](double x) { return (x - mean) / variance; };
  p.symmetrized_cramer = [=](double x) { return x * x / (4.0 * variance); };
  p.symmetrized_cramer_derivative = [=](double x) { return x / (2.0 * variance); };
  return Measure1D(std::move(p));
}

Measure1D make_exponential_one_sided() {
  Measure1D::Parts p;
  p.name = "exp+";
  p.log_density = [](double x) { return x >= 0.0 ? -x : kNegInf; };
  p.cdf = [](double x) { return x > 0.0 ? -std::expm1(-x) : 0.0; };
  p.sf = [](double x) { return x > 0.0 ? std::exp(-x) : 1.0; };
  p.log_cdf = [](double x) { return x > 0.0 ? std::log(-std::expm1(-x)) : kNegInf; };
  p.log_sf = [](double x) { return x > 0.0 ? -x : 0.0; };
  p.quantile = [](double q) { return -std::log1p(-q); };
  p.support = {0.0, kInf};
  p.symmetric = false;
  p.center = 0.0;
  p.log_mgf = [](double t) { return t < 1.0 ? -std::log1p(-t) : kInf; };
  p.cramer = [](double x) { return x > 0.0 ? (x - 1.0) - std::log(x) : kInf; };
  p.cramer_derivative = [](double x) { return x > 0.0 ? 1.0 - 1.0 / x : -kInf; };
  // The symmetrization of the one-sided exponential is the symmetric exponential.
  p.symmetrized_cramer = [](double x) { return exp_sym_cramer(x); };
  p.symmetrized_cramer_derivative = [](double x) { return exp_sym_cramer_derivative(x); };
  return Measure1D(std::move(p));
}

Measure1D make_symmetric_exponential() {
  Measure1D::Parts p;
  p.name = "exp-sym";
  p.log_density = [](double x) { return -std::abs(x) - kLn2; };
  p.cdf = [](double x) { return x < 0.0 ? 0.5 * std::exp(x) : 1.0 - 0.5 * std::exp(-x); };
  p.sf = [](double x) { return x > 0.0 ? 0.5 * std::exp(-x) : 1.0 - 0.5 * std::exp(x); };
  p.log_cdf = [](double x) { return x < 0.0 ? x - kLn2 : std::log1p(-0.5 * std::exp(-x)); };
  p.log_sf = [](double x) { return x > 0.0 ? -x - kLn2 : std::log1p(-0.5 * std::exp(x)); };
  p.quantile = [](double q) { return q < 0.5 ? std::log(2.0 * q) : -std::log(2.0 * (1.0 - q)); };
  p.support = {-kInf, kInf};
  p.symmetric = true;
  p.center = 0.0;
  p.log_mgf = [](double t) { return std::abs(t) < 1.0 ? -std::log1p(-t * t) : kInf; };
  p.cramer = [](double x) { return exp_sym_cramer(x); };
  p.cramer_derivative = [](double x) { return exp_sym_cramer_derivative(x); };
  return Measure1D(std::move(p));
}

Potential potential_from_spec(std::string_view spec) {
  if (spec == "abs") return {"abs", [](double x) { return std::abs(x); }};
  if (spec == "square") return {"square", [](double x) { return 0.5 * x * x; }};
  if (spec == "uniform") {
    return {"uniform", [](double x) { return std::abs(x) <= 1.0 ? 0.0 : kInf; }};
  }
  if (spec.starts_with("power:")) {
    const double p = parse_double(spec.substr(6), "power exponent");
    if (!(p > 0.0)) throw InvalidParameter("power potential needs a positive exponent");
    return {std::string(spec), [p](double x) { return std::pow(std::abs(x), p); }};
  }
  throw InvalidParameter("unknown potential spec '" + std::string(spec) +
                         "' (expected abs, square, power:<p> or uniform)");
}

Measure1D make_logconcave_even(const Potential& potential, bool normalize) {
  auto table = std::make_shared<const PotentialTable>(potential);

  double scale = 1.0;
  if (normalize) {
    const double edge = table->edge();
    auto weighted = [&](double x) {
      const double ld = table->log_density(x);
      return std::isfinite(ld) ? x * x * std::exp(ld) : 0.0;
    };
    const double m2 = quad::integrate_line(weighted, -edge, edge, 0.0);
    scale = std::sqrt(m2);
  }
  const double log_scale = std::log(scale);

  Measure1D::Parts p;
  p.name = "logconcave:" + potential.label;
  p.log_density = [table, scale, log_scale](double x) {
    return log_scale + table->log_density(scale * x);
  };
  p.cdf = [table, scale](double x) { return table->lower_cdf(scale * x); };
  p.sf = [table, scale](double x) { return table->sf(scale * x); };
  p.log_cdf = [table, scale](double x) { return table->log_sf(-scale * x); };
  p.log_sf = [table, scale](double x) { return table->log_sf(scale * x); };
  p.support = {-table->edge() / scale, table->edge() / scale};
  p.symmetric = true;
  p.center = 0.0;
  return Measure1D(std::move(p));
}

Measure1D measure_from_name(std::string_view name) {
  if (name == "gaussian") return make_gaussian(0.0, 1.0);
  if (name == "exp+") return make_exponential_one_sided();
  if (name == "exp-sym") return make_symmetric_exponential();
  if (name.starts_with("logconcave:")) {
    return make_logconcave_even(potential_from_spec(name.substr(11)), true);
  }
  throw InvalidParameter("unknown measure '" + std::string(name) +
                         "' (expected gaussian, exp+, exp-sym or logconcave:<potential>)");
}

std::pair<double, double> log_mgf_with_derivative(const Measure1D& mu, double t) {
  auto phi = [&](double y) { return t * y + mu.log_density(y); };
  const quad::Peak peak = quad::concave_peak(phi, mu.support().lo, mu.support().hi, mu.center());
  if (peak.divergent || !std::isfinite(peak.value)) return {kInf, kInf};
  auto weight = [&](double y) {
    const double e = phi(y) - peak.value;
    return std::isfinite(e) ? std::exp(e) : 0.0;
  };
  try {
    const double mass = quad::integrate_line(weight, mu.support().lo, mu.support().hi, peak.arg);
    const double first = quad::integrate_line(
        [&](double y) { return (y - peak.arg) * weight(y); }, mu.support().lo, mu.support().hi,
        peak.arg);
    return {peak.value + std::log(mass), peak.arg + first / mass};
  } catch (const DivergenceError&) {
    return {kInf, kInf};
  }
}

double log_mgf_numeric(const Measure1D& mu, double t) {
  auto phi = [&](double y) { return t * y + mu.log_density(y); };
  const quad::Peak peak = quad::concave_peak(phi, mu.support().lo, mu.support().hi, mu.center());
  if (peak.divergent || !std::isfinite(peak.value)) return kInf;
  auto weight = [&](double y) {
    const double e = phi(y) - peak.value;
    return std::isfinite(e) ? std::exp(e) : 0.0;
  };
  try {
    const double mass = quad::integrate_line(weight, mu.support().lo, mu.support().hi, peak.arg);
    return peak.value + std::log(mass);
  } catch (const DivergenceError&) {
    return kInf;
  }
}

double log_mgf(const Measure1D& mu, double t) {
  if (const auto& closed = mu.closed_form_log_mgf()) return (*closed)(t);
  return log_mgf_numeric(mu, t);
}

SymmetrizedMeasure::SymmetrizedMeasure(Measure1D base) : base_(std::move(base)) {
  if (const auto& direct = base_.closed_form_symmetrized_cramer()) {
    cramer_ = direct;
    cramer_slope_ = base_.closed_form_symmetrized_cramer_derivative();
  } else if (base_.symmetric() && base_.closed_form_cramer()) {
    RealFn single = *base_.closed_form_cramer();
    cramer_ = [single](double x) { return 2.0 * single(0.5 * x); };
    if (const auto& d = base_.closed_form_cramer_derivative()) {
      RealFn slope = *d;
      cramer_slope_ = [slope](double x) { return slope(0.5 * x); };
    }
  }
}

double SymmetrizedMeasure::log_mgf(double t) const {
  const double plus = tauforge::log_mgf(base_, t);
  if (!std::isfinite(plus)) return kInf;
  const double minus = tauforge::log_mgf(base_, -t);
  if (!std::isfinite(minus)) return kInf;
  return plus + minus;
}

SymmetrizedMeasure symmetrize(const Measure1D& mu) {
  SymmetrizedMeasure sym(mu);
  for (int k = 0; k <= 40; ++k) {
    if (std::isfinite(sym.log_mgf(std::ldexp(1.0, -k)))) return sym;
  }
  throw UnsupportedMeasure("symmetrize: Laplace transform of '" + mu.name() +
                           "' is infinite everywhere off 0");
}

}  // namespace tauforge
