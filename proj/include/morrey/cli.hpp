// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace morrey::cli {

/// Exit codes: 0 all checks pass, 1 some check failed, 2 usage or parameter
/// error, 3 numeric error (NonFiniteSample, Infeasible).
enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kNumeric = 3 };

/// Command-line entry point; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace morrey::cli
