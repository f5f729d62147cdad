#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cavity::cli {

enum ExitCode : int { ok = 0, config_error = 2, numerical_error = 3 };

/// Runs one command line (without the program name). Artifacts are written
/// only after every computation for the command has succeeded.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cavity::cli
