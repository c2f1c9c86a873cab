#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vortexlab::cli {

enum ExitCode { kPass = 0, kFailure = 1, kMismatch = 2 };

/// Runs one command. args excludes the program name. Reports go to --out when
/// given, otherwise to out; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vortexlab::cli
