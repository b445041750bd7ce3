#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace advsel {

// Entry point of the command line tool, separated from main() so tests can
// drive it in process.  `args` excludes the program name.  Returns the
// process exit code: 0 success, 1 a verification found a counterexample,
// 2 usage error, 3 I/O failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace advsel
