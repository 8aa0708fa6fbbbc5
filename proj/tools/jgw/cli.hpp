#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jgw::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kData = 3,
    kDomain = 4,
    kNumeric = 5,
};

/// Runs one invocation. `args` excludes the program name. Output files are
/// written only after every computation succeeded.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jgw::cli
