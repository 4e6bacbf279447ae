#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "tauforge/grid_function.hpp"
#include "tauforge/tau.hpp"

namespace tauforge {

/// Defaults read from a "key = value" file; '#' starts a comment.
/// Keys: grid (lo:hi:n), pass_slack, fail_margin, rel_tol, seed.
struct Config {
  GridSpec grid{};
  TauOptions tau{};
  std::uint64_t seed = 20240613;
};

inline constexpr const char* kConfigEnv = "TAUFORGE_CONFIG";

/// Throws InvalidInput on unknown keys or malformed values.
Config parse_config(std::istream& in, const std::string& origin = "<config>");
Config load_config(const std::string& path);
/// load_config($TAUFORGE_CONFIG) when the variable is set, else the defaults.
Config default_config();

}  // namespace tauforge
