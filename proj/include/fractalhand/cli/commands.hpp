#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fractalhand::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIngest = 2;
inline constexpr int kExitCompute = 3;

// Runs one invocation; args excludes the program name. Nothing is written to the output
// directory unless the whole command succeeds.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fractalhand::cli
