#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qx {

/// Runs one CLI invocation (argv without the program name). Deterministic
/// output for a fixed argument/seed pair; returns the process exit code.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace qx
