#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tauforge/grid_function.hpp"

namespace tauforge {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;  // exceeding it fails the criterion
};

/// Seeded convex test function on `grid`: a quadratic, a kink, a linear term and a
/// softplus with random coefficients.
GridFunction random_convex_function(std::uint64_t seed, const GridSpec& grid);

/// Runs one criterion (1..10); throws InvalidParameter for other ids.
CriterionResult run_criterion(int id);
std::vector<CriterionResult> run_acceptance();

}  // namespace tauforge
