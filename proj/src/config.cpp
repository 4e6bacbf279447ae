#include "tauforge/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <string_view>

namespace tauforge {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view text, const std::string& where) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidInput(where + ": cannot parse '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

Config parse_config(std::istream& in, const std::string& origin) {
  Config c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw InvalidInput(where + ": expected key = value");
    const std::string_view key = trim(view.substr(0, eq));
    const std::string_view value = trim(view.substr(eq + 1));
    if (key == "grid") {
      c.grid = GridSpec::parse(value);
    } else if (key == "pass_slack") {
      c.tau.pass_slack = parse_number<double>(value, where);
    } else if (key == "fail_margin") {
      c.tau.fail_margin = parse_number<double>(value, where);
    } else if (key == "rel_tol") {
      c.tau.rel_tol = parse_number<double>(value, where);
    } else if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(value, where);
    } else {
      throw InvalidInput(where + ": unknown key '" + std::string(key) + "'");
    }
  }
  if (!(c.tau.pass_slack >= 0.0) || !(c.tau.fail_margin >= c.tau.pass_slack) ||
      !(c.tau.rel_tol > 0.0)) {
    throw InvalidInput(origin + ": need 0 <= pass_slack <= fail_margin and rel_tol > 0");
  }
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

Config default_config() {
  const char* path = std::getenv(kConfigEnv);
  if (path == nullptr || *path == '\0') return {};
  return load_config(path);
}

}  // namespace tauforge
