#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace curvecast::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 2,
    kNotConverged = 3,
    kUnreachableTarget = 4,
};

/// Runs `curvecast <args...>` (args exclude the program name) writing
/// reports to `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color = false);

} // namespace curvecast::cli
