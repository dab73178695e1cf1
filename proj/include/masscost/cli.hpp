#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace masscost {

/// Exit codes of the command line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitNotConverged = 2,  // also a failed numerical check; results are still written
};

/// Environment variable overriding the default output directory.
inline constexpr const char* kOutputDirEnv = "MASSCOST_OUT_DIR";

/// Runs one subcommand: exponents, verify, cost-curve, profile,
/// slope-profile, bubbles, gamma-run, droplet-check. args excludes the
/// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace masscost
