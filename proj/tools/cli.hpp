#pragma once

#include <ostream>

namespace rllcap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Parses and runs one invocation. Results go to `--output` if given, else to `out`;
/// diagnostics and usage go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rllcap::cli
