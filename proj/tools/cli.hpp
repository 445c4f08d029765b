#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace hurst_sde::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one of the `gen`, `simulate`, `estimate`, `mc` subcommands.
/// `args` excludes the program name. Returns the process exit code.
int cli_dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);

int cli_dispatch(int argc, char** argv);

}  // namespace hurst_sde::cli
