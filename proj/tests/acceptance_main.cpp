// One line per acceptance criterion; exit status is nonzero when any fails.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "tauforge/acceptance.hpp"

int main(int argc, char** argv) {
  int failures = 0;
  auto run = [&](int id) {
    const tauforge::CriterionResult r = tauforge::run_criterion(id);
    std::printf("[%s] criterion %2d  %-44s %7.3fs / %gs  %s\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.time_limit, r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failures;
  };
  if (argc > 1) {
    for (int k = 1; k < argc; ++k) run(std::atoi(argv[k]));
  } else {
    for (int id = 1; id <= 10; ++id) run(id);
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
