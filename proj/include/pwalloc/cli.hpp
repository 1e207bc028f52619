#pragma once

#include <iosfwd>
#include <string>
#include <vector>

// Command-line front end. Subcommands: curve, solve, sweep-k, min-r,
// threshold, compare. Exit codes: 0 success, 1 usage error, 2 solver or
// oracle error. All numeric output carries 9 significant digits and is
// byte-for-byte reproducible for identical inputs.

namespace pwalloc::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Convenience for tests: arguments without the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pwalloc::cli
