#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace optomech {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitSolver = 2,
    kExitIo = 3,
};

// Environment variable overriding the output directory of `figure`.
inline constexpr const char* kOutputDirEnv = "OMIT_OUTPUT_DIR";

// Entry point of the `omit` tool. args excludes the program name. Data goes
// to `out`, diagnostics to `err`.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace optomech
