#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qtk::cli {

/// Runs one command line (args[0] is the program name). JSON goes to `out`,
/// human-readable summaries and `error:` diagnostics to `err`.
/// Returns the process exit code: 0 success, 2 user/input error, 1 internal.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace qtk::cli
