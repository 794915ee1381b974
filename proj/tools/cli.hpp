#ifndef HSAMM_TOOLS_CLI_HPP_
#define HSAMM_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace hsamm::cli {

enum ExitCode {
  kOk = 0,
  kViolated = 1,
  kUsage = 2,
  kStateLimit = 3,
  kUnreachable = 4,
};

// Runs one invocation. `args` excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err, bool color = false);

}  // namespace hsamm::cli

#endif  // HSAMM_TOOLS_CLI_HPP_
