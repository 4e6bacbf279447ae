#include "tauforge/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace tauforge {

double round9(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::strtod(buf, nullptr);
}

Json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return round9(v);
}

Json envelope(const std::string& command) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = command;
  return j;
}

Json to_json(const TauReport& r) {
  return Json{{"family_member", r.member},
              {"integral_left", num(r.integral_left)},
              {"integral_right", num(r.integral_right)},
              {"product", num(r.product)},
              {"pass", r.pass},
              {"verdict", to_string(r.verdict)}};
}

Json to_json(const SuiteResult& s) {
  Json members = Json::array();
  for (const auto& r : s.reports) members.push_back(to_json(r));
  return Json{{"measure", s.measure},
              {"beta", num(s.beta)},
              {"members", s.reports.size()},
              {"passed", s.passed},
              {"failed", s.failed},
              {"inconclusive", s.inconclusive},
              {"max_product", num(s.max_product)},
              {"worst_member", s.worst_member},
              {"all_pass", s.all_pass()},
              {"reports", members}};
}

Json to_json(const CounterexampleIntegrals& c) {
  return Json{{"I1", num(c.i1)}, {"I2", num(c.i2)}, {"I3", num(c.i3)},
              {"I4", num(c.i4)}, {"P1", num(c.p1)}, {"P2", num(c.p2)}};
}

Json to_json(const Lemma51Report& r) {
  return Json{{"x_max", num(r.x_max)},
              {"n", r.n},
              {"slope_ok", r.slope_ok},
              {"exponential_ok", r.exponential_ok},
              {"worst_slope_margin", num(r.worst_slope_margin)},
              {"worst_slope_x", num(r.worst_slope_x)},
              {"worst_exponential_margin", num(r.worst_exponential_margin)},
              {"worst_exponential_x", num(r.worst_exponential_x)},
              {"pass", r.pass()}};
}

Json to_json(const DeltaSolution& d, double theta) {
  return Json{{"theta", num(theta)},
              {"delta", num(d.delta)},
              {"c", num(d.c)},
              {"C", num(d.C)},
              {"residuals",
               {{"theta", num(exp_sym_cramer(theta) - std::log(2.0))}, {"delta", num(d.residual)}}}};
}

Json to_json(const DominationReport& d) {
  return Json{{"c", num(d.c)},
              {"delta", num(d.delta)},
              {"beta", num(d.beta)},
              {"x_max", num(d.x_max)},
              {"n", d.n},
              {"worst_margin", num(d.worst_margin)},
              {"worst_x", num(d.worst_x)},
              {"worst_chain_margin", num(d.worst_chain_margin)},
              {"worst_actual_margin", num(d.worst_actual_margin)},
              {"worst_actual_x", num(d.worst_actual_x)},
              {"boundary_margin", num(d.boundary_margin)},
              {"pass", d.pass}};
}

Json to_json(const TransportDiagnostics& d) {
  return Json{{"target", d.target},
              {"derivative_at_zero", num(d.derivative_at_zero)},
              {"oddness", num(d.oddness)},
              {"monotone_violation", num(d.monotone_violation)},
              {"concavity_violation", num(d.concavity_violation)},
              {"pushforward_error", num(d.pushforward_error)},
              {"omega_error", num(d.omega_error)},
              {"omega_checked_to", num(d.omega_checked_to)},
              {"domination", to_json(d.domination)},
              {"pass", d.pass}};
}

Json to_json(const InclusionReport& r) {
  Json wit = Json::array();
  for (const auto& w : r.witnesses) {
    wit.push_back({{"x", num(w.x)}, {"y", num(w.y)}, {"z", num(w.z)}, {"slack", num(w.slack)}});
  }
  return Json{{"t", num(r.t)},
              {"dim", r.dim},
              {"samples_checked", r.samples_checked},
              {"worst_slack", num(r.worst_slack)},
              {"worst_at", num(r.worst_x)},
              {"worst_l1_margin", num(r.worst_l1_margin)},
              {"worst_l2_margin", num(r.worst_l2_margin)},
              {"rounding_flags", r.rounding_flags},
              {"bounded_sublevel", r.bounded_sublevel},
              {"boundary", {num(r.boundary_lo), num(r.boundary_hi)}},
              {"decomposition_witnesses", wit},
              {"pass", r.pass}};
}

Json to_json(const McResult& m) {
  return Json{{"dim", m.dim},
              {"t", num(m.t)},
              {"trials", m.trials},
              {"seed", m.seed},
              {"threshold", num(m.threshold)},
              {"empirical", num(m.empirical)},
              {"exact", num(m.exact)},
              {"bound", num(m.bound)},
              {"sigma", num(m.sigma)},
              {"pass", m.pass}};
}

Json to_json(const Lemma84Scan& s) {
  return Json{{"theta", num(s.theta)},
              {"n", s.n},
              {"min_gap", num(s.min_gap)},
              {"argmin", num(s.argmin)},
              {"H0", num(s.h0)},
              {"H1", num(s.h1)},
              {"x0", num(s.x0)},
              {"increasing_before_x0", s.increasing_before_x0},
              {"pass", s.pass}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace tauforge
