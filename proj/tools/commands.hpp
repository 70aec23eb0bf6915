#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace exonav::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kNumerical = 3,
  kIo = 4,
};

/// Environment variable naming the default tube-spec JSON.
inline constexpr const char* kSpecEnvVar = "EXONAV_SPEC";

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace exonav::cli
