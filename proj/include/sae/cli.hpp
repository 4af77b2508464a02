#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sae::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumerical = 3;

// args[0] is the program name. Diagnostics go to `err` as a single line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace sae::cli
