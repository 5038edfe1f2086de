#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace logobs::cli {

// Parses and executes one command line (program name excluded). Notices and
// diagnostics go to `out`; data files go to the configured output directory.
// Returns the process exit code: 0 success, 1 config error, 2 numeric
// failure, 3 precondition failure.
int run(const std::vector<std::string>& args, std::ostream& out);

}  // namespace logobs::cli
