#pragma once

// Command-line front end: solve, sweep, critical, oracle, energy.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "epitaxy/model.hpp"

namespace epitaxy::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNoSolutions = 1;
inline constexpr int kExitConfig = 2;

// Default output directory when --out-dir is not given.
inline constexpr const char* kOutDirEnv = "EPITAXY_OUT_DIR";

// "one" or "power:P" (f = r^P). Throws ConfigError.
Forcing parse_forcing(std::string_view text);

// "a:b:step" (inclusive of b up to rounding) or a comma list. Throws
// ConfigError.
std::vector<double> parse_lambdas(std::string_view text);

struct RunConfig {
  std::string command;
  ProblemSpec spec;
  std::filesystem::path out_dir;
  std::string prefix;
  bool csv = true;
  bool svg = true;
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Convenience for tests: args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace epitaxy::cli
