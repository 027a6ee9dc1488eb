#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace netab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitInternal = 1;

/// Runs one command. `args` excludes the program name. Machine-readable
/// results go to `out` as single-line JSON; logs go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace netab::cli
