#pragma once

// One-dimensional integration and scalar root/extremum search.
//
// Everything numeric in the toolkit funnels through these routines: adaptive
// Simpson for finite panels, a chunked outward sweep for half-lines (truncated
// where the integrand drops below a 1e-14 tail estimate), Gauss-Kronrod
// for integrands that are expensive to evaluate, bisection and golden-section.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tauforge/errors.hpp"

namespace tauforge::quad {

struct SimpsonOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_depth = 48;
  int panels = 8;
  /// Refinement stops once this many evaluations were spent (noisy integrands).
  long max_evals = 400000;
};

namespace detail {

template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth, long& budget) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  budget -= 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double sum = left + right;
  const double delta = sum - whole;
  if (depth <= 0 || budget <= 0 || std::abs(delta) <= 15.0 * tol || std::abs(delta) <= 1e-15 * std::abs(sum) ||
      !(lm > a && rm < b)) {
    return sum + delta / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, budget) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, budget);
}

}  // namespace detail

/// Adaptive Simpson on the finite interval [a, b]. The local acceptance test is
/// |S(left)+S(right)-S(whole)| <= 15 tol with tol halved at each split; the
/// starting tol is max(abs_tol, rel_tol * |coarse estimate|).
template <class F>
double adaptive_simpson(F&& f, double a, double b, const SimpsonOptions& opt = {}) {
  if (a == b) return 0.0;
  if (a > b) return -adaptive_simpson(f, b, a, opt);
  const int panels = std::max(1, opt.panels);
  const double width = (b - a) / panels;

  double coarse = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double hi = (p + 1 == panels) ? b : lo + width;
    coarse += (hi - lo) / 6.0 * (f(lo) + 4.0 * f(0.5 * (lo + hi)) + f(hi));
  }
  const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(coarse)) / panels;

  double total = 0.0;
  long budget = opt.max_evals;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double hi = (p + 1 == panels) ? b : lo + width;
    const double flo = f(lo);
    const double fmid = f(0.5 * (lo + hi));
    const double fhi = f(hi);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    total += detail::simpson_rec(f, lo, hi, flo, fmid, fhi, whole, tol, opt.max_depth, budget);
  }
  return total;
}

struct TailOptions {
  double first_step = 1.0;
  /// Stop once |f(cut)| * |cut - start| <= cutoff * |running total|. The left side
  /// bounds the remainder for tails decaying like 1/x^2 or faster.
  double cutoff = 1e-14;
  /// Distance from the start beyond which a still-significant integrand counts as divergent.
  double limit = 1e16;
  SimpsonOptions simpson{};
};

struct TailResult {
  double value = 0.0;
  double cut = 0.0;
  bool converged = true;
};

/// Integrates f from `start` towards `edge` (which may be +-infinity) in chunks of
/// doubling length.
template <class F>
TailResult integrate_tail(F&& f, double start, double edge, const TailOptions& opt = {}) {
  const double direction = edge >= start ? 1.0 : -1.0;
  TailResult out;
  out.cut = start;
  if (edge == start) return out;
  double pos = start;
  double step = opt.first_step;
  for (;;) {
    double next = pos + direction * step;
    const bool hit_edge = direction > 0 ? next >= edge : next <= edge;
    if (hit_edge) next = edge;
    out.value += adaptive_simpson(f, std::min(pos, next), std::max(pos, next), opt.simpson);
    pos = next;
    out.cut = pos;
    if (hit_edge) return out;
    if (std::abs(f(pos)) * std::abs(pos - start) <= opt.cutoff * std::abs(out.value)) return out;
    if (std::abs(pos - start) >= opt.limit) {
      out.converged = false;
      return out;
    }
    step *= 2.0;
  }
}

/// Integral of f over (lo, hi), either end possibly infinite, swept outward from `split`.
/// Throws DivergenceError when a tail fails to decay.
template <class F>
double integrate_line(F&& f, double lo, double hi, double split, const TailOptions& opt = {}) {
  split = std::clamp(split, lo, hi);
  const TailResult right = integrate_tail(f, split, hi, opt);
  const TailResult left = integrate_tail(f, split, lo, opt);
  if (!right.converged || !left.converged) {
    throw DivergenceError("integrand does not decay before |x| = " +
                          std::to_string(std::max(std::abs(right.cut), std::abs(left.cut))));
  }
  return right.value + left.value;
}

/// Adaptive 15-point Gauss-Kronrod (relative tolerance against the L1 norm).
template <class F>
double gauss_kronrod(F&& f, double a, double b, double rel_tol = 1e-10, unsigned max_depth = 12) {
  if (a == b) return 0.0;
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, rel_tol,
                                                                        &err);
}

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Globally adaptive Gauss-Kronrod over consecutive panels [cuts[k], cuts[k+1]]: the
/// panel with the largest error estimate is halved until the summed estimate drops
/// below max(abs_tol, rel_tol |total|) or `max_panels` is reached.
template <class F>
double gauss_kronrod_global(F&& f, const std::vector<double>& cuts, double rel_tol,
                            double abs_tol = 0.0, std::size_t max_panels = 4000) {
  struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  auto eval = [&](double a, double b) {
    double err = 0.0;
    const double v =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
    return Panel{a, b, v, err};
  };
  std::priority_queue<Panel> heap;
  double total = 0.0;
  double error = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (!(cuts[k] < cuts[k + 1])) continue;
    Panel p = eval(cuts[k], cuts[k + 1]);
    total += p.value;
    error += p.error;
    heap.push(p);
  }
  while (!heap.empty() && heap.size() < max_panels &&
         error > std::max(abs_tol, rel_tol * std::abs(total))) {
    const Panel worst = heap.top();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(m > worst.a && m < worst.b)) break;
    heap.pop();
    const Panel l = eval(worst.a, m);
    const Panel r = eval(m, worst.b);
    total += (l.value + r.value) - worst.value;
    error += (l.error + r.error) - worst.error;
    heap.push(l);
    heap.push(r);
  }
  // Re-sum to shed the drift of the running updates.
  CompensatedSum sum;
  for (; !heap.empty(); heap.pop()) sum.add(heap.top().value);
  return sum.value();
}

/// Bisection for a sign change of f on [a, b]. Returns the midpoint of the final bracket.
template <class F>
double bisect(F&& f, double a, double b, double tol = 1e-12, int max_iter = 400) {
  double fa = f(a);
  const double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) {
    throw InvalidParameter("bisect: f has no sign change on the bracket");
  }
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// Golden-section search for the maximum of a unimodal f on [a, b].
/// Returns {argmax, max}.
template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b, double tol = 1e-12) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while ((b - a) > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    if (!(c > a && d < b)) break;
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

struct Peak {
  double arg = 0.0;
  double value = 0.0;
  bool divergent = false;  // still rising more than 1e9 away from the start
};

/// Maximum of a concave function on [lo, hi] (either end may be infinite). Steps
/// of doubling length away from `start` bracket the peak, golden section refines it.
/// Points where phi is -inf count as outside the domain.
template <class Phi>
Peak concave_peak(Phi&& phi, double lo, double hi, double start, double tol = 1e-14) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const double c = std::clamp(start, lo, hi);
  const double fc = phi(c);
  const double probe = 1e-6 * std::max(1.0, std::abs(c));
  const double up = c + probe <= hi ? phi(c + probe) : kNegInf;
  const double down = c - probe >= lo ? phi(c - probe) : kNegInf;
  if (up <= fc && down <= fc) return {c, fc, false};

  const double dir = up > down ? 1.0 : -1.0;
  const double edge = dir > 0 ? hi : lo;
  double before = c;
  double prev = c;
  double fprev = fc;
  double step = 1.0;
  for (int k = 0; k < 80; ++k) {
    double next = prev + dir * step;
    const bool at_edge = dir > 0 ? next >= edge : next <= edge;
    if (at_edge) next = edge;
    const double fnext = phi(next);
    if (fnext < fprev) {
      const auto [a, b] = std::minmax(before, next);
      const auto [arg, val] = golden_max(phi, a, b, tol);
      return val >= fprev ? Peak{arg, val, false} : Peak{prev, fprev, false};
    }
    if (at_edge) return {edge, fnext, false};
    if (std::abs(next - c) > 1e9) return {next, fnext, true};
    before = prev;
    prev = next;
    fprev = fnext;
    step *= 2.0;
  }
  return {prev, fprev, true};
}

/// Type-erased convenience wrapper around integrate_line.
double integrate(const std::function<double(double)>& f, double lo, double hi, double split = 0.0);

}  // namespace tauforge::quad
