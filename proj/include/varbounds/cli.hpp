#pragma once

#include <ostream>

namespace varbounds {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 1,         // unreadable or invalid input, usage error
  kExitMembership = 2,    // defining-identity residual above tolerance
  kExitSingular = 3,      // a factor (1 - j*delta) vanished
  kExitClass = 4,         // a test function left the admissible class
  kExitNoSampler = 5,     // Monte Carlo requested for a member without a sampler
  kExitVerdict = 6,       // a requested inequality or MC cross-check failed
};

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace varbounds
