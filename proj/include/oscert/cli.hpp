#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace oscert {

/// Parses argv-style arguments (without the program name), dispatches to
/// the drivers, and writes the report to `out` and error messages to
/// `err`.  Returns the process exit code: 0 when a verdict was computed
/// (including Inconclusive), 1 when a mathematical hypothesis failed or
/// the numerics could not reach the requested accuracy, 2 on input
/// errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace oscert
