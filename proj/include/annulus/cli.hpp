#pragma once

// Command-line front end.

#include <ostream>
#include <string>
#include <vector>

namespace annulus::cli {

enum ExitCode : int { ok = 0, check_failed = 1, input_error = 2, numerical_failure = 3 };

/// Subcommands: kernel, evolve, verify, lebedev, schema. `args` excludes the
/// program name. Diagnostics go to `err`, summaries to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace annulus::cli
