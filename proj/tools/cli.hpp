#ifndef TSOGAME_TOOLS_CLI_HPP
#define TSOGAME_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace tsogame::cli {

inline constexpr int kExitDecided = 0;
inline constexpr int kExitUndecidable = 1;
inline constexpr int kExitInputError = 2;

// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tsogame::cli

#endif  // TSOGAME_TOOLS_CLI_HPP
