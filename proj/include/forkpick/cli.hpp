#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace forkpick::cli {

enum ExitCode { kTrue = 0, kFalse = 1, kInputError = 2, kUnknown = 3 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace forkpick::cli
