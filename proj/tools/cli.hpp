#ifndef CRC_TOOLS_CLI_HPP
#define CRC_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace crc::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Runs the `crc` command line with `args` (program name excluded) and
// returns the process exit code.  Diagnostics go to `err`; data written to
// stdout goes to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crc::cli

#endif  // CRC_TOOLS_CLI_HPP
