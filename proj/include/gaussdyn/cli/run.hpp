// Command-line entry point, usable from tests without spawning a process.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gaussdyn::cli {

enum ExitCode : int { kSuccess = 0, kConfigError = 1, kNumericalFailure = 2 };

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Worker count after applying the GAUSSDYN_THREADS cap (at least 1).
unsigned capped_workers(unsigned requested);

}  // namespace gaussdyn::cli
