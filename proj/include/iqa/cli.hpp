#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace iqa::cli {

/// Exit codes: 0 success, 1 domain error, 2 usage error.
enum ExitCode { kOk = 0, kDomainError = 1, kUsageError = 2 };

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace iqa::cli
