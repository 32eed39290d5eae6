#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qmeasure::cli {

/// Runs the `qmeasure` command line.  `args` includes the program name.
/// Returns the process exit code: 0 on success, 2 for usage errors, 1 for any
/// other failure, which is reported on `err` as a JSON error envelope.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmeasure::cli
