#ifndef EFFDOF_CLI_HPP
#define EFFDOF_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace effdof::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInternalError = 1,
  kParseError = 2,
  kValidationError = 3,
  kDegenerate = 4,
};

/// Entry point of the `effdof` tool. Writes results to `out` and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same as above; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace effdof::cli

#endif  // EFFDOF_CLI_HPP
