#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace csl::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,  // also parse and I/O errors
    kNoPositiveLimit = 2,
};

/// Runs one invocation. args excludes the program name. Reports and CSV go to
/// out (or the --output file), warnings and errors to err. Nothing is written
/// to out or the output file unless the whole command succeeds.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace csl::cli
