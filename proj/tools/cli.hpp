// Command-line front end; run_command is the whole program minus main().

#ifndef FOP_TOOLS_CLI_HPP
#define FOP_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace fop::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitSolver = 4;

inline constexpr const char* kToolName = "fopv";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "fop-report/1";

// args excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fop::cli

#endif  // FOP_TOOLS_CLI_HPP
