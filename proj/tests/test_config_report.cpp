#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tauforge/config.hpp"
#include "tauforge/errors.hpp"
#include "tauforge/grid_function.hpp"
#include "tauforge/report.hpp"
#include "tauforge/tau.hpp"
#include "tauforge/transport.hpp"

using namespace tauforge;

TEST_CASE("config file parsing") {
  std::istringstream in(
      "# defaults for a quick run\n"
      "grid = -20:20:1024\n"
      "pass_slack = 1e-7   # tighter\n"
      "fail_margin=2e-4\n"
      "\n"
      "rel_tol = 1e-9\n"
      "seed = 7\n");
  const Config c = parse_config(in);
  CHECK(c.grid.lo == -20.0);
  CHECK(c.grid.hi == 20.0);
  CHECK(c.grid.n == 1024);
  CHECK(c.tau.pass_slack == 1e-7);
  CHECK(c.tau.fail_margin == 2e-4);
  CHECK(c.tau.rel_tol == 1e-9);
  CHECK(c.seed == 7);
}

TEST_CASE("config errors") {
  std::istringstream unknown("colour = blue\n");
  CHECK_THROWS_AS(parse_config(unknown), InvalidInput);
  std::istringstream noeq("grid -1:1:3\n");
  CHECK_THROWS_AS(parse_config(noeq), InvalidInput);
  std::istringstream badnum("pass_slack = tiny\n");
  CHECK_THROWS_AS(parse_config(badnum), InvalidInput);
  std::istringstream order("pass_slack = 1e-2\nfail_margin = 1e-3\n");
  CHECK_THROWS_AS(parse_config(order), InvalidInput);
  CHECK_THROWS_AS(load_config("/nonexistent/tauforge.conf"), InvalidInput);
}

TEST_CASE("grid specs") {
  const GridSpec g = GridSpec::parse("-1.5:2.5:9");
  CHECK(g.lo == -1.5);
  CHECK(g.n == 9);
  CHECK(g.step() == 0.5);
  CHECK_THROWS_AS(GridSpec::parse("1:2"), InvalidParameter);
  CHECK_THROWS_AS(GridSpec::parse("a:b:c"), std::invalid_argument);
  CHECK_THROWS(GridSpec{1.0, 0.0, 5}.validate());
  CHECK_THROWS(GridSpec{0.0, 1.0, 1}.validate());
}

TEST_CASE("grid function CSV round trip keeps infinities") {
  const GridFunction f(GridSpec{-1.0, 1.0, 5}, {kInf, 0.25, 0.0, 1.0 / 3.0, kInf});
  std::stringstream s;
  f.write_csv(s);
  const GridFunction g = GridFunction::read_csv(s);
  CHECK(g.values().size() == 5);
  CHECK(std::isinf(g[0]));
  CHECK(g[3] == f[3]);
  CHECK(g.lo() == -1.0);
  std::istringstream uneven("x,value\n0,1\n1,2\n3,4\n");
  CHECK_THROWS_AS(GridFunction::read_csv(uneven), InvalidInput);
}

TEST_CASE("numbers are rounded to nine significant digits") {
  CHECK(round9(3.14159265358979) == 3.14159265);
  CHECK(round9(-1.23456789012e-7) == -1.23456789e-7);
  CHECK(num(kInf) == "inf");
  CHECK(num(-kInf) == "-inf");
  CHECK(num(0.5).is_number());
}

TEST_CASE("report envelope and deterministic dumps") {
  const Json e = envelope("constants");
  CHECK(e["schema"] == "tauforge/1");
  CHECK(e["command"] == "constants");
  Json j = envelope("constants");
  j.update(to_json(solve_delta(1.7320508075688772), solve_theta()));
  CHECK(j["C"].get<double>() == 9.61930666);
  CHECK(j.begin().key() == "schema");
  CHECK(dump(j) == dump(j));
  CHECK(dump(j).back() == '\n');
}

TEST_CASE("suite reports carry every member") {
  TauReport a{"a", 1.0, 0.5, 0.5, true, Verdict::pass};
  TauReport b{"b", 2.0, 0.6, 1.2, false, Verdict::fail};
  SuiteResult s{"gaussian", 1.0, {a, b}, 1, 1, 0, 1.2, "b"};
  const Json j = to_json(s);
  CHECK(j["reports"].size() == 2);
  CHECK(j["reports"][1]["verdict"] == "fail");
  CHECK(j["reports"][0]["family_member"] == "a");
  CHECK(j["all_pass"] == false);
}
