#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace optsp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitPrecondition = 3;
inline constexpr int kExitBudget = 4;
inline constexpr int kExitMismatch = 5;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Lines of `classify --table1`.
std::vector<std::string> table1_lines();

}  // namespace optsp::cli
