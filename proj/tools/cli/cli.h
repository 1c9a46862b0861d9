#ifndef GRAPHMATCH_TOOLS_CLI_H_
#define GRAPHMATCH_TOOLS_CLI_H_

#include <ostream>

namespace graphmatch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs the graphmatch command line and returns the process exit code.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace graphmatch::cli

#endif  // GRAPHMATCH_TOOLS_CLI_H_
