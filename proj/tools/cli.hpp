#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mspe::cli {

enum ExitCode : int {
  ok = 0,
  usage = 1,
  parse_error = 2,
  solver_error = 3,
  infeasible = 4,
  not_certifiable = 5,
};

/// Runs the command line `args` (without the program name) and returns the
/// process exit code. Regular output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mspe::cli
