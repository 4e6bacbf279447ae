// Command-line front end. Exit codes: 0 verified, 1 verification failed, 2 usage error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tauforge/acceptance.hpp"
#include "tauforge/concentration.hpp"
#include "tauforge/config.hpp"
#include "tauforge/convex_transforms.hpp"
#include "tauforge/infimum_convolution.hpp"
#include "tauforge/report.hpp"
#include "tauforge/tau.hpp"
#include "tauforge/transport.hpp"

namespace tf = tauforge;

namespace {

struct Globals {
  std::string config_path;
  std::string grid;
  std::string out;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw tf::InvalidInput("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

tf::Config resolve_config(const Globals& g) {
  tf::Config c = g.config_path.empty() ? tf::default_config() : tf::load_config(g.config_path);
  if (!g.grid.empty()) c.grid = tf::GridSpec::parse(g.grid);
  return c;
}

int emit(const Globals& g, const tf::Json& j, bool ok) {
  Output out(g.out);
  out.stream() << tf::dump(j);
  return ok ? 0 : 1;
}

int emit_csv(const Globals& g, const tf::GridFunction& f) {
  Output out(g.out);
  f.write_csv(out.stream());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for infimum-convolution inequalities and their transforms",
               "tauforge"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path,
                 "key = value defaults file (else $" + std::string(tf::kConfigEnv) + ")");
  app.add_option("--grid", g.grid, "grid for test functions, lo:hi:n (default -50:50:4096)");
  app.add_option("-o,--out", g.out, "write the result here instead of stdout");
  app.fallthrough();

  std::function<int()> action;

  // transform
  auto* transform = app.add_subcommand("transform", "Legendre and Cramer transforms");
  transform->require_subcommand(1);
  std::string legendre_in;
  std::string legendre_slopes;
  auto* legendre_cmd = transform->add_subcommand("legendre", "convex conjugate of a grid CSV");
  legendre_cmd->add_option("--in", legendre_in, "input CSV (x,value)")->required();
  legendre_cmd->add_option("--slopes", legendre_slopes, "slope grid lo:hi:m (default: data slopes)");
  legendre_cmd->callback([&] {
    action = [&] {
      const tf::GridFunction f = tf::GridFunction::read_csv_file(legendre_in);
      if (legendre_slopes.empty()) return emit_csv(g, tf::legendre(f, f.size()));
      const tf::GridSpec s = tf::GridSpec::parse(legendre_slopes);
      s.validate();
      return emit_csv(g, tf::legendre(f, s.lo, s.hi, s.n));
    };
  });
  std::string cramer_measure;
  std::string cramer_x;
  auto* cramer_cmd = transform->add_subcommand("cramer", "Cramer transform on a grid");
  cramer_cmd->add_option("--measure", cramer_measure, "gaussian, exp+, exp-sym, logconcave:<p>")
      ->required();
  cramer_cmd->add_option("--x", cramer_x, "grid lo:hi:n")->required();
  cramer_cmd->callback([&] {
    action = [&] {
      const tf::Measure1D mu = tf::measure_from_name(cramer_measure);
      const tf::GridSpec x = tf::GridSpec::parse(cramer_x);
      x.validate();
      std::function<double(double)> rate;
      if (mu.closed_form_cramer()) {
        rate = *mu.closed_form_cramer();
      } else if (mu.symmetric()) {
        auto table = std::make_shared<tf::EvenCramerTable>(
            [&mu](double t) { return tf::log_mgf_with_derivative(mu, t); },
            std::max(mu.support().hi, -mu.support().lo),
            std::max(std::abs(x.lo), std::abs(x.hi)) + 1.0);
        rate = [table](double v) { return (*table)(v); };
      } else {
        rate = [&mu](double v) { return tf::cramer_numeric(mu, v); };
      }
      return emit_csv(g, tf::GridFunction::sample(rate, x));
    };
  });

  // infconv
  std::string infconv_f;
  std::string infconv_g;
  auto* infconv_cmd = app.add_subcommand("infconv", "infimum convolution of two grid CSVs");
  infconv_cmd->add_option("--f", infconv_f, "first CSV")->required();
  infconv_cmd->add_option("--g", infconv_g, "second CSV")->required();
  infconv_cmd->callback([&] {
    action = [&] {
      return emit_csv(g, tf::infconv(tf::GridFunction::read_csv_file(infconv_f),
                                     tf::GridFunction::read_csv_file(infconv_g)));
    };
  });

  // tau
  auto* tau = app.add_subcommand("tau", "property (tau) checks");
  tau->require_subcommand(1);
  std::string tau_measure;
  double tau_beta = 1.0;
  std::string tau_family = "default";
  std::optional<std::uint64_t> tau_seed;
  bool expect_fail = false;
  bool brief = false;
  auto* check = tau->add_subcommand("check", "run a test-function family against IC(beta)");
  check->add_option("--measure", tau_measure, "measure name")->required();
  check->add_option("--beta", tau_beta, "beta > 0")->required();
  check->add_option("--family", tau_family, "'default' or a CSV / list of CSV paths");
  check->add_option("--seed", tau_seed, "seed of the random members");
  check->add_flag("--expect-fail", expect_fail,
                  "succeed when some member exceeds 1 + fail_margin");
  check->add_flag("--brief", brief, "omit the per-member reports");
  check->callback([&] {
    action = [&] {
      const tf::Config cfg = resolve_config(g);
      const tf::Measure1D mu = tf::measure_from_name(tau_measure);
      tf::SuiteResult s;
      if (tau_family == "default") {
        tf::FamilySpec spec{cfg.grid, tau_seed.value_or(cfg.seed)};
        s = tf::ic_suite(mu, tau_beta, spec, cfg.tau);
      } else {
        s = tf::ic_suite(mu, tau_beta, tf::family_from_file(tau_family), cfg.tau);
      }
      tf::Json j = tf::envelope("tau check");
      tf::Json body = tf::to_json(s);
      if (brief) body.erase("reports");
      j.update(body);
      j["expect_fail"] = expect_fail;
      const bool ok = expect_fail ? s.failed > 0 : s.all_pass();
      j["verified"] = ok;
      return emit(g, j, ok);
    };
  });
  auto* counter = tau->add_subcommand("counterexample", "half-line integrals refuting IC(1)");
  counter->callback([&] {
    action = [&] {
      const tf::CounterexampleIntegrals c = tf::counterexample_integrals();
      tf::Json j = tf::envelope("tau counterexample");
      j.update(tf::to_json(c));
      const bool ok = c.p1 > 1.0 && c.p2 > 1.0;
      j["verified"] = ok;
      return emit(g, j, ok);
    };
  });
  std::string l51_cost;
  double l51_xmax = 200.0;
  std::size_t l51_n = 10001;
  auto* l51 = tau->add_subcommand("lemma51", "2|W'| <= 1 and e^W (1 - 4 W'^2) >= 1 on [0, xmax]");
  l51->add_option("--cost", l51_cost, "ic:<measure>:<beta>, maurey, linear:a, quadratic:a, zero")
      ->required();
  l51->add_option("--xmax", l51_xmax, "right end of the grid")->required();
  l51->add_option("--n", l51_n, "grid points");
  l51->callback([&] {
    action = [&] {
      const tf::Lemma51Report r = tf::lemma51_conditions(tf::cost_from_spec(l51_cost), l51_xmax,
                                                         l51_n);
      tf::Json j = tf::envelope("tau lemma51");
      j["cost"] = l51_cost;
      j.update(tf::to_json(r));
      return emit(g, j, r.pass());
    };
  });

  // constants
  double const_c = std::numbers::sqrt3;
  auto* constants = app.add_subcommand("constants", "theta, delta and C = 2 c delta");
  constants->add_option("--c", const_c, "c > 0 (default sqrt 3)");
  constants->callback([&] {
    action = [&] {
      const double theta = tf::solve_theta();
      const tf::DeltaSolution d = tf::solve_delta(const_c);
      tf::Json j = tf::envelope("constants");
      j.update(tf::to_json(d, theta));
      return emit(g, j, std::abs(d.residual) < 1e-10);
    };
  });

  // transport
  auto* transport = app.add_subcommand("transport", "transport from the symmetric exponential");
  transport->require_subcommand(1);
  std::string target = "gaussian";
  double transport_c = std::numbers::sqrt3;
  auto* tcheck = transport->add_subcommand("check", "diagnostics of T and the cost domination");
  tcheck->add_option("--target", target, "isotropic even measure")->required();
  tcheck->add_option("--c", transport_c, "constant c >= T'(0) (default sqrt 3)");
  tcheck->callback([&] {
    action = [&] {
      const tf::TransportDiagnostics d =
          tf::transport_diagnostics(tf::measure_from_name(target), transport_c);
      tf::Json j = tf::envelope("transport check");
      j.update(tf::to_json(d));
      return emit(g, j, d.pass);
    };
  });

  // concentration
  auto* conc = app.add_subcommand("concentration", "ball inclusion and Monte-Carlo checks");
  conc->require_subcommand(1);
  double conc_t = 1.0;
  std::size_t conc_dim = 1;
  std::size_t conc_samples = 10001;
  std::size_t conc_trials = 100000;
  std::uint64_t conc_seed = 42;
  std::string witness_csv;
  auto* inclusion = conc->add_subcommand("inclusion", "B_W(2t) inside 4t B_1 + 8 sqrt(t) B_2");
  inclusion->add_option("--t", conc_t, "t > 0")->required();
  inclusion->add_option("--dim", conc_dim, "dimension (1 uses an even grid)");
  inclusion->add_option("--samples", conc_samples, "number of points");
  inclusion->add_option("--seed", conc_seed, "seed (dimension > 1)");
  inclusion->add_option("--witnesses", witness_csv, "dump witnesses as CSV x,y,z,slack");
  inclusion->callback([&] {
    action = [&] {
      const tf::InclusionReport r =
          conc_dim == 1 ? tf::ball_inclusion_1d(tf::reference_cost(), conc_t, conc_samples)
                        : tf::ball_inclusion_nd(conc_t, conc_dim, conc_samples, conc_seed);
      if (!witness_csv.empty()) {
        std::ofstream w(witness_csv);
        if (!w) throw tf::InvalidInput("cannot write '" + witness_csv + "'");
        w << "x,y,z,slack\n";
        char line[160];
        for (const auto& wit : r.witnesses) {
          std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", wit.x, wit.y, wit.z,
                        wit.slack);
          w << line;
        }
      }
      tf::Json j = tf::envelope("concentration inclusion");
      j.update(tf::to_json(r));
      return emit(g, j, r.pass);
    };
  });
  auto* mc = conc->add_subcommand("mc", "enlarged half-space mass under the product law");
  mc->add_option("--dim", conc_dim, "dimension")->required();
  mc->add_option("--t", conc_t, "t >= 0")->required();
  mc->add_option("--trials", conc_trials, "trials (>= 1000)");
  mc->add_option("--seed", conc_seed, "seed");
  mc->callback([&] {
    action = [&] {
      const tf::McResult m = tf::mc_concentration(conc_dim, conc_t, conc_trials, conc_seed);
      tf::Json j = tf::envelope("concentration mc");
      j.update(tf::to_json(m));
      return emit(g, j, m.pass);
    };
  });

  // report
  auto* report = app.add_subcommand("report", "acceptance battery");
  report->require_subcommand(1);
  auto* all = report->add_subcommand("all", "run criteria 1-10 and write one JSON document");
  all->callback([&] {
    action = [&] {
      tf::Json j = tf::envelope("report all");
      tf::Json crit = tf::Json::array();
      bool ok = true;
      for (const tf::CriterionResult& r : tf::run_acceptance()) {
        ok = ok && r.pass;
        crit.push_back({{"id", r.id},
                        {"name", r.name},
                        {"pass", r.pass},
                        {"detail", r.detail},
                        {"time_limit_s", tf::num(r.time_limit)}});
      }
      j["criteria"] = crit;
      j["all_pass"] = ok;
      return emit(g, j, ok);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return action ? action() : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "tauforge: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "tauforge: " << e.what() << "\n";
    return 1;
  }
}
