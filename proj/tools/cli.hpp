#ifndef COMMGRAPH_TOOLS_CLI_HPP
#define COMMGRAPH_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace commgraph::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace commgraph::cli

#endif  // COMMGRAPH_TOOLS_CLI_HPP
